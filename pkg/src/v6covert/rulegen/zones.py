"""Country zone files (one IPv6 CIDR per line, ``#`` comments) to string prefixes."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..addr import parse_addr
from ..errors import InvalidAddress, MalformedLine

ZONE_SUFFIX = "-ipv6.zone"
_CC = re.compile(r"^[a-z]{2}$")


@dataclass
class ZonePrefixSet:
    country_code: str
    prefixes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.country_code = self.country_code.lower()
        if not _CC.match(self.country_code):
            raise ValueError(f"country code must be two letters, got {self.country_code!r}")
        for p in self.prefixes:
            if not p.endswith(":"):
                raise ValueError(f"prefix {p!r} must end with ':'")


def _split_cidr(line: str, lineno: int) -> tuple[str, int]:
    addr, _, plen = line.partition("/")
    try:
        parse_addr(addr)
        length = int(plen) if plen else 128
    except (InvalidAddress, ValueError):
        raise MalformedLine(lineno, line) from None
    if not 0 <= length <= 128:
        raise MalformedLine(lineno, line)
    return addr, length


def prefix_text(line: str, lineno: int = 0) -> str:
    """String prefix for one CIDR line.

    ``2001:db8::/32`` keeps the text before ``::`` plus ``:``.  A line with
    no ``::`` keeps the groups covering the prefix length (``/32`` -> 2
    groups), each in canonical short hex.
    """
    addr, length = _split_cidr(line, lineno)
    if "::" in addr:
        return addr[:addr.find("::")] + ":"
    groups = parse_addr(addr).groups[:max(1, math.ceil(length / 16))]
    return ":".join(f"{g:x}" for g in groups) + ":"


def parse_zone(country: str, text: str) -> ZonePrefixSet:
    prefixes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        prefixes.append(prefix_text(line, lineno))
    return ZonePrefixSet(country, prefixes)


def load_zone_file(path) -> ZonePrefixSet:
    path = Path(path)
    if not path.name.endswith(ZONE_SUFFIX):
        raise ValueError(f"{path.name}: expected <cc>{ZONE_SUFFIX}")
    cc = path.name[:-len(ZONE_SUFFIX)]
    return parse_zone(cc, path.read_text())


def load_zone_dir(directory) -> list[ZonePrefixSet]:
    """Every ``<cc>-ipv6.zone`` file in ``directory``, sorted by country code."""
    paths = sorted(Path(directory).glob(f"??{ZONE_SUFFIX}"))
    return [load_zone_file(p) for p in paths]
