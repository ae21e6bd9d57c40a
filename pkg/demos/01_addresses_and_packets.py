"""
Addresses, packets and pcap files
=================================

Parse and print IPv6 addresses, build a raw packet, write it to a pcap
file and read it back.
"""

import tempfile
from pathlib import Path

from v6covert.addr import parse_addr
from v6covert.packet import Icmpv6Echo, Packet, RawBytes, parse_packet, serialize_packet
from v6covert.pcap import pcap_read, pcap_write

# text is canonicalised: lower case, leading zeros dropped, longest zero run as "::"
for text in ["2001:0DB8:0000:0000:0000:0000:0000:0001", "fe80:0:0:0:1:0:0:1", "::ffff:192.0.2.1"]:
    a = parse_addr(text)
    print(f"{text:45} -> {a}  ({a.klass.name})")

# a 4-octet payload behind "no next header"
src, dst = parse_addr("2001:db8:0:1663::1ce"), parse_addr("2001:db8:0:1662:7a8a:20ff:fe43:93d4")
raw = Packet.build(RawBytes(b"test"), src=src, dst=dst, hop_limit=62)
wire = serialize_packet(raw)
print("\nraw packet:", wire.hex(" ", 2))

# echo requests get their checksum filled in on serialisation
ping = Packet.build(Icmpv6Echo(128, 0, 0x1337, 1, b"hello"), src=src, dst=dst)
back = parse_packet(serialize_packet(ping))
print("echo checksum ok:", back.checksum_ok, " checksum:", hex(back.payload.checksum))

# and everything can go through a classic pcap file (linktype 229, raw IPv6)
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "two.pcap"
    pcap_write([raw, ping], path)
    print("pcap bytes:", path.stat().st_size, " packets read back:", len(pcap_read(path)))
