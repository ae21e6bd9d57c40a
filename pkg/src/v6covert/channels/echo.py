"""ICMPv6 echo channel: two XOR-ed message octets per echo request.

Each request carries ``sequence = (c0 << 8) | c1`` where ``c0, c1`` are
message octets XOR-ed with the key; a final odd octet is sent alone in the
low byte.  No framing is added, so the decoder decides one-vs-two octets
from the high byte alone.  Consequence: a pair whose first octet equals the
key encrypts to a zero high byte and is decoded as a single octet, losing
that octet.  :func:`echo_expected_decode` computes exactly what the
decoder returns for any message.
"""

from __future__ import annotations

import math

from ..packet import ICMPV6_ECHO_REQUEST, Icmpv6Echo, Packet
from .config import Channel, ChannelConfig, Transmission


def echo_sequences(msg: bytes, key: int) -> list[int]:
    enc = bytes(b ^ key for b in msg)
    seqs = []
    for i in range(0, len(enc), 2):
        chunk = enc[i:i + 2]
        seqs.append((chunk[0] << 8) | chunk[1] if len(chunk) == 2 else chunk[0])
    return seqs


def echo_encode(msg: bytes, cfg: ChannelConfig = ChannelConfig()) -> Transmission:
    packets = [
        Packet.build(Icmpv6Echo(ICMPV6_ECHO_REQUEST, 0, cfg.icmp_id, seq, cfg.stock_payload),
                     src=cfg.src, dst=cfg.dst, hop_limit=cfg.hop_limit)
        for seq in echo_sequences(msg, cfg.xor_key)
    ]
    assert len(packets) == math.ceil(len(msg) / 2)
    return Transmission(Channel.ICMP_ECHO_SEQ, packets, len(msg))


class EchoReceiver:
    """Streaming decoder; feed packets in arrival order."""

    def __init__(self, cfg: ChannelConfig = ChannelConfig()):
        self.cfg = cfg
        self._out = bytearray()
        self.accepted = 0

    def feed(self, p: Packet) -> bytes:
        pl = p.payload
        if not (isinstance(pl, Icmpv6Echo) and pl.is_request
                and pl.identifier == self.cfg.icmp_id):
            return b""
        key = self.cfg.xor_key
        hi, lo = pl.sequence >> 8, pl.sequence & 0xFF
        got = bytes([lo ^ key]) if hi == 0 else bytes([hi ^ key, lo ^ key])
        self._out += got
        self.accepted += 1
        return got

    @property
    def message(self) -> bytes:
        return bytes(self._out)


def echo_decode(packets, cfg: ChannelConfig = ChannelConfig()) -> bytes:
    rx = EchoReceiver(cfg)
    for p in packets:
        rx.feed(p)
    return rx.message


def echo_expected_decode(msg: bytes, key: int = 0x17) -> bytes:
    """What :func:`echo_decode` yields for ``echo_encode(msg)``: every octet
    equal to ``key`` that opens a two-octet pair is dropped."""
    out = bytearray()
    for i in range(0, len(msg), 2):
        pair = msg[i:i + 2]
        if len(pair) == 2 and pair[0] == key:
            out.append(pair[1])
        else:
            out += pair
    return bytes(out)


def echo_roundtrips(msg: bytes, key: int = 0x17) -> bool:
    return echo_expected_decode(msg, key) == bytes(msg)
