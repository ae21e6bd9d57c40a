"""
The flow label as a 20-bit data carrier
=======================================

The message is gzip-compressed and cut into 20-bit chunks, one per packet
flow label, between a start and an end marker.
"""

import math

from v6covert.channels import FlowLabelFraming, fl_decode, fl_encode
from v6covert.channels.flowlabel import compress

secret = b"THISISASECRET"
comp = compress(secret)
print(f"{len(secret)} octets compress to {len(comp)} octets")
print("expected packets:", 2 + math.ceil(8 * len(comp) / 20))

tx = fl_encode(secret)
print("packets sent:", len(tx))
print("labels:", " ".join(f"{p.flow_label:05x}" for p in tx))
print("decoded:", fl_decode(tx))

# other framing constants need the same constants on both ends
custom = FlowLabelFraming(start_magic=0x12345, end_magic=0x54321)
print("custom framing:", fl_decode(fl_encode(secret, framing=custom), custom))

# longer texts compress well, so packets grow slower than the message
for n in (10, 100, 1000):
    msg = (b"the quick brown fox " * 100)[:n]
    print(f"  {n:5} octets -> {len(fl_encode(msg)):4} packets")
