"""Neighbor Solicitation channel: 8 message octets per NS target address.

A transmission is one length packet followed by ``ceil(n / 8)`` data
packets.  Every target sits inside ``cfg.ns_prefix``/64; the interface
identifier holds either the message length (length packet) or an 8-octet
chunk, zero-padded at the end.  The length packet is told apart by a
non-zero reserved word (:data:`LENGTH_MARK`), which receivers must ignore.
"""

from __future__ import annotations

import math

from ..addr import Ipv6Addr
from ..errors import LengthMismatch, MissingLength
from ..packet import ND_NEIGHBOR_SOLICIT, Icmpv6NeighborMsg, Packet
from .config import Channel, ChannelConfig, Transmission

CHUNK = 8
LENGTH_MARK = 0x00000001
ND_HOP_LIMIT = 255


def _ns(target: Ipv6Addr, flags: int, cfg: ChannelConfig) -> Packet:
    return Packet.build(Icmpv6NeighborMsg(ND_NEIGHBOR_SOLICIT, 0, flags, target),
                        src=cfg.src, dst=cfg.dst, hop_limit=ND_HOP_LIMIT)


def chunk_target(prefix: Ipv6Addr, iid: int) -> Ipv6Addr:
    return Ipv6Addr(prefix.prefix(64).value | iid)


def ns_encode(msg: bytes, cfg: ChannelConfig = ChannelConfig()) -> Transmission:
    msg = bytes(msg)
    packets = [_ns(chunk_target(cfg.ns_prefix, len(msg)), LENGTH_MARK, cfg)]
    for i in range(0, len(msg), CHUNK):
        chunk = msg[i:i + CHUNK].ljust(CHUNK, b"\x00")
        packets.append(_ns(chunk_target(cfg.ns_prefix, int.from_bytes(chunk, "big")), 0, cfg))
    return Transmission(Channel.NS_TARGET, packets, len(msg))


def ns_decode(packets, cfg: ChannelConfig = ChannelConfig()) -> bytes:
    length = None
    chunks = []
    for p in packets:
        pl = p.payload
        if not (isinstance(pl, Icmpv6NeighborMsg) and pl.is_solicitation
                and pl.target.in_prefix(cfg.ns_prefix, 64)):
            continue
        if pl.flags_reserved == LENGTH_MARK:
            if length is not None:
                break  # next transmission
            length = pl.target.interface_id
        elif length is not None and pl.flags_reserved == 0:
            chunks.append(pl.target.interface_id.to_bytes(CHUNK, "big"))
    if length is None:
        raise MissingLength("no length packet in stream")
    if len(chunks) != math.ceil(length / CHUNK):
        raise LengthMismatch(f"declared {length} octets needs {math.ceil(length / CHUNK)} "
                             f"data packets, got {len(chunks)}")
    return b"".join(chunks)[:length]
