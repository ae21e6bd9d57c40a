from __future__ import annotations

from ..addr import Ipv6Addr
from ..packet import Icmpv6NeighborMsg


def extract_neighbor_targets(src) -> list[Ipv6Addr]:
    """Target addresses of every NS/NA seen, first-seen order, without duplicates."""
    seen: dict[Ipv6Addr, None] = {}
    for p in src:
        if isinstance(p.payload, Icmpv6NeighborMsg):
            seen.setdefault(p.payload.target, None)
    return list(seen)
