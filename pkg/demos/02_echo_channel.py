"""
Hiding a message in ping sequence numbers
=========================================

Every echo request carries two message octets in its sequence number,
XORed with a one-octet key.  The payload is the stock ping6 one, so the
packets look ordinary apart from their sequence numbers.
"""

from v6covert.channels import ChannelConfig, echo_decode, echo_encode, echo_expected_decode

secret = b"THISISASECRET"
tx = echo_encode(secret)
print(f"{len(secret)} octets -> {len(tx)} echo requests")
for p in tx:
    print(f"  id {p.payload.identifier:#06x}  seq {p.payload.sequence:#06x}")

print("decoded:", echo_decode(tx))

# a receiver with the wrong key still decodes, but gets garbage back
print("with key 0x18:", echo_decode(tx, ChannelConfig(xor_key=0x18)))

# the odd final octet travels alone in the low byte, so a pair whose first
# octet equals the key is indistinguishable from a lone octet
tricky = b"\x17AB"
print("tricky message", tricky, "decodes to", echo_decode(echo_encode(tricky)),
      "(expected", echo_expected_decode(tricky), ")")
