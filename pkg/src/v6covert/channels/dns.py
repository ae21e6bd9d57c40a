"""DNS AAAA channel and nsupdate script emission.

Each record address is ``[chunk length][chunk, zero-padded to 15]`` and the
owner name is ``<index>.<label>.<zone>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..addr import Ipv6Addr, as_addr
from ..errors import BadLength, DuplicateIndex
from .config import Channel, Transmission

CHUNK = 15
DEFAULT_TTL = 60


def _check_name(name: str) -> str:
    name = name.rstrip(".")
    labels = name.split(".")
    if not name or any(not lab or len(lab) > 63 for lab in labels) or len(name) > 253:
        raise ValueError(f"invalid DNS name {name!r}")
    return name


@dataclass(frozen=True)
class AaaaRecord:
    owner: str
    ttl: int
    addr: Ipv6Addr

    def __post_init__(self):
        object.__setattr__(self, "owner", _check_name(self.owner))
        object.__setattr__(self, "addr", as_addr(self.addr))

    @property
    def labels(self) -> list[str]:
        return self.owner.split(".")

    @property
    def index(self) -> int | None:
        first = self.labels[0]
        return int(first) if first.isdigit() else None


@dataclass
class DnsUpdateScript:
    server: str
    zone: str
    lines: list[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def dns_encode(msg: bytes, zone: str, label: str, ttl: int = DEFAULT_TTL) -> list[AaaaRecord]:
    zone, label = _check_name(zone), _check_name(label)
    records = []
    for i, off in enumerate(range(0, len(msg), CHUNK)):
        chunk = bytes(msg[off:off + CHUNK])
        raw = bytes([len(chunk)]) + chunk.ljust(CHUNK, b"\x00")
        records.append(AaaaRecord(f"{i}.{label}.{zone}", ttl, Ipv6Addr.from_bytes(raw)))
    return records


def dns_transmission(msg: bytes, zone: str, label: str, ttl: int = DEFAULT_TTL) -> Transmission:
    return Transmission(Channel.DNS_AAAA, dns_encode(msg, zone, label, ttl), len(msg))


def dns_decode(records) -> bytes:
    by_index = {}
    for r in records:
        idx = r.index
        if idx is None:
            raise ValueError(f"owner {r.owner!r} has no leading decimal index")
        if idx in by_index:
            raise DuplicateIndex(f"index {idx} appears twice")
        by_index[idx] = r
    out = bytearray()
    for idx in sorted(by_index):
        raw = by_index[idx].addr.packed
        n = raw[0]
        if not 1 <= n <= CHUNK:
            raise BadLength(f"record {idx} declares {n} octets")
        out += raw[1:1 + n]
    return bytes(out)


def emit_nsupdate(records, server: str, zone: str) -> DnsUpdateScript:
    lines = [f"server {server}", f"zone {zone}"]
    lines += [f"update add {r.owner} {r.ttl} AAAA {r.addr}" for r in records]
    lines.append("send")
    return DnsUpdateScript(server, zone, lines)


def parse_nsupdate(text: str) -> list[AaaaRecord]:
    """Recover the AAAA records from an nsupdate script (other commands are skipped)."""
    records = []
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 6 and parts[:2] == ["update", "add"] and parts[4].upper() == "AAAA":
            records.append(AaaaRecord(parts[2], int(parts[3]), parts[5]))
    return records
