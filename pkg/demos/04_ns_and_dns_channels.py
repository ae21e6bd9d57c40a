"""
Neighbor solicitations and AAAA records
=======================================

Eight message octets fit in the interface identifier of a solicited target,
and fifteen fit in an AAAA record (the first octet holds the chunk length).
"""

from v6covert.channels import (ChannelConfig, dns_decode, dns_encode, emit_nsupdate, ns_decode,
                               ns_encode, parse_nsupdate)
from v6covert.detect import extract_neighbor_targets

secret = b"THISISASECRET"

tx = ns_encode(secret, ChannelConfig(ns_prefix="fe80::"))
print("solicited targets:")
for t in extract_neighbor_targets(tx):
    print("  ", t)
print("decoded:", ns_decode(tx))

records = dns_encode(b"a somewhat longer secret for the dns channel", "z.example", "x")
script = emit_nsupdate(records, "127.0.0.1", "z.example")
print("\nnsupdate script:")
print(script.text)
print("decoded:", dns_decode(parse_nsupdate(script.text)))
