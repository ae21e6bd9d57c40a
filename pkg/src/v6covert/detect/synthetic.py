"""Deterministic benign traffic for calibrating the detectors.

Mixes monotonic ping sessions (with replies), UDP-like traffic with zero or
per-flow constant flow labels, and neighbor solicitations that are each
answered by an advertisement.
"""

from __future__ import annotations

import random

from ..addr import Ipv6Addr
from ..channels.config import STOCK_PAYLOAD
from ..packet import Icmpv6Echo, Icmpv6NeighborMsg, Packet, RawBytes


def _host(rng: random.Random, net: int = 0x20010DB8) -> Ipv6Addr:
    return Ipv6Addr((net << 96) | rng.getrandbits(64))


def _link_local(rng: random.Random) -> Ipv6Addr:
    return Ipv6Addr((0xFE80 << 112) | rng.getrandbits(64))


def _ping_session(rng):
    a, b = _host(rng), _host(rng)
    ident, start = rng.getrandbits(16), rng.randrange(0, 60000)
    out = []
    for k in range(rng.randrange(4, 40)):
        seq = (start + k) & 0xFFFF
        out.append(Packet.build(Icmpv6Echo(128, 0, ident, seq, STOCK_PAYLOAD), src=a, dst=b))
        out.append(Packet.build(Icmpv6Echo(129, 0, ident, seq, STOCK_PAYLOAD), src=b, dst=a))
    return out


def _udp_flow(rng):
    a, b = _host(rng), _host(rng)
    label = 0 if rng.random() < 0.6 else rng.getrandbits(20)
    return [Packet.build(RawBytes(rng.randbytes(rng.randrange(8, 120))), src=a, dst=b,
                         flow_label=label, next_header=17)
            for _ in range(rng.randrange(5, 60))]


def _neighbor_exchange(rng):
    asker = _link_local(rng)
    out = []
    for _ in range(rng.randrange(1, 3)):
        target = _link_local(rng)
        out.append(Packet.build(Icmpv6NeighborMsg(135, 0, 0, target), src=asker,
                                dst="ff02::1:ff00:0", hop_limit=255))
        out.append(Packet.build(Icmpv6NeighborMsg(136, 0, 0x60000000, target), src=target,
                                dst=asker, hop_limit=255))
    return out


def benign_corpus(n: int = 10_000, seed: int = 0) -> list[Packet]:
    """``n`` packets of benign-looking traffic; same ``seed``, same packets."""
    rng = random.Random(seed)
    makers = [_ping_session, _udp_flow, _neighbor_exchange]
    streams: list[list[Packet]] = []
    total = 0
    while total < n:
        s = rng.choice(makers)(rng)
        streams.append(s)
        total += len(s)
    # interleave a few streams at a time, preserving each stream's order
    out: list[Packet] = []
    active: list[list[Packet]] = []
    pending = list(reversed(streams))
    while len(out) < n and (active or pending):
        while pending and len(active) < 6:
            active.append(list(reversed(pending.pop())))
        s = rng.choice(active)
        out.append(s.pop())
        if not s:
            active.remove(s)
    return out
