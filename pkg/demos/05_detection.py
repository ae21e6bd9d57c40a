"""
Spotting the channels
=====================

Mix covert traffic into a synthetic benign capture and let the detectors
find it.
"""

from v6covert.channels import dns_encode, echo_encode, fl_encode, ns_encode
from v6covert.detect import detect_dns_covert, detect_packets, render_text
from v6covert.detect.synthetic import benign_corpus

benign = benign_corpus(5000, seed=7)
print("benign packets:", len(benign), " findings:", len(detect_packets(benign)))

# the NS detector wants at least eight distinct targets, so 57+ octets
secret = b"meet me at the usual place at noon, bring the second set of keys"
stream = (benign[:1500] + list(fl_encode(secret)) + benign[1500:3000]
          + list(echo_encode(secret)) + benign[3000:4000] + list(ns_encode(secret))
          + benign[4000:])
print(render_text(detect_packets(stream)), end="")

print(render_text(detect_dns_covert(dns_encode(secret, "z.example", "x"))), end="")
