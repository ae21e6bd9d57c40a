"""128-bit IPv6 addresses: parsing, canonical formatting and classification.

The same address has many textual spellings (``fe80::1``,
``fe80:0000::1``, ``FE80:0:0:0:0:0:0:1``...).  Everything in this package
compares addresses by value and prints them in a single canonical form:
lowercase hex, no leading zeros, the longest run of two or more zero groups
collapsed to ``::`` (leftmost run on a tie).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidAddress

_MAX = (1 << 128) - 1
_HEX = frozenset("0123456789abcdefABCDEF")


class AddressClass(enum.Enum):
    GLOBAL_UNICAST = "GlobalUnicast"   # 2000::/3
    LINK_LOCAL = "LinkLocal"           # fe80::/10
    MULTICAST = "Multicast"            # ff00::/8
    OTHER = "Other"                    # unallocated / everything else


@dataclass(frozen=True, order=True, slots=True)
class Ipv6Addr:
    value: int = 0

    def __post_init__(self):
        if not isinstance(self.value, int) or not 0 <= self.value <= _MAX:
            raise InvalidAddress(f"address value out of range: {self.value!r}")

    @classmethod
    def parse(cls, text: str) -> "Ipv6Addr":
        return parse_addr(text)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Ipv6Addr":
        if len(data) != 16:
            raise InvalidAddress(f"need 16 octets, got {len(data)}")
        return cls(int.from_bytes(data, "big"))

    @classmethod
    def from_groups(cls, groups) -> "Ipv6Addr":
        groups = list(groups)
        if len(groups) != 8 or any(not 0 <= g <= 0xFFFF for g in groups):
            raise InvalidAddress(f"need eight 16-bit groups, got {groups!r}")
        value = 0
        for g in groups:
            value = (value << 16) | g
        return cls(value)

    @property
    def packed(self) -> bytes:
        return self.value.to_bytes(16, "big")

    @property
    def groups(self) -> tuple[int, ...]:
        return tuple((self.value >> (112 - 16 * i)) & 0xFFFF for i in range(8))

    @property
    def interface_id(self) -> int:
        return self.value & ((1 << 64) - 1)

    def prefix(self, length: int) -> "Ipv6Addr":
        """Return the address with all but the top ``length`` bits cleared."""
        if not 0 <= length <= 128:
            raise ValueError(f"prefix length out of range: {length}")
        mask = (_MAX << (128 - length)) & _MAX
        return Ipv6Addr(self.value & mask)

    def in_prefix(self, net: "Ipv6Addr", length: int) -> bool:
        return self.prefix(length) == net.prefix(length)

    @property
    def klass(self) -> AddressClass:
        return classify_addr(self)

    @property
    def is_link_local(self) -> bool:
        return self.klass is AddressClass.LINK_LOCAL

    @property
    def is_global_unicast(self) -> bool:
        return self.klass is AddressClass.GLOBAL_UNICAST

    @property
    def is_multicast(self) -> bool:
        return self.klass is AddressClass.MULTICAST

    @property
    def is_unallocated(self) -> bool:
        return self.klass is AddressClass.OTHER

    def __str__(self) -> str:
        return format_addr(self)

    def __repr__(self) -> str:
        return f"Ipv6Addr('{format_addr(self)}')"


UNSPECIFIED = Ipv6Addr(0)


def _parse_groups(part: str, text: str, allow_v4: bool) -> list[int]:
    if part == "":
        return []
    groups = []
    fields = part.split(":")
    for i, field in enumerate(fields):
        if allow_v4 and i == len(fields) - 1 and "." in field:
            groups.extend(_parse_v4_tail(field, text))
            continue
        if field == "":
            raise InvalidAddress(f"empty group in {text!r}")
        if len(field) > 4 or not set(field) <= _HEX:
            raise InvalidAddress(f"bad group {field!r} in {text!r}")
        groups.append(int(field, 16))
    return groups


def _parse_v4_tail(field: str, text: str) -> list[int]:
    octets = field.split(".")
    if len(octets) != 4 or not all(o.isdigit() and len(o) <= 3 for o in octets):
        raise InvalidAddress(f"bad embedded IPv4 {field!r} in {text!r}")
    vals = [int(o) for o in octets]
    if any(v > 255 for v in vals):
        raise InvalidAddress(f"bad embedded IPv4 {field!r} in {text!r}")
    return [(vals[0] << 8) | vals[1], (vals[2] << 8) | vals[3]]


def parse_addr(text: str) -> Ipv6Addr:
    """Parse any valid textual IPv6 literal into its 128-bit value.

    Accepts ``::`` compression, omitted leading zeros, upper or lower case,
    the full eight-group form and a dotted IPv4 tail (``::ffff:1.2.3.4``).
    Raises :class:`InvalidAddress` otherwise.
    """
    if not isinstance(text, str) or not text:
        raise InvalidAddress(f"not an IPv6 literal: {text!r}")
    if text.count("::") > 1:
        raise InvalidAddress(f"multiple '::' in {text!r}")
    if ":::" in text:
        raise InvalidAddress(f"bad compression in {text!r}")

    if "::" in text:
        head, tail = text.split("::")
        left = _parse_groups(head, text, allow_v4=False)
        right = _parse_groups(tail, text, allow_v4=True)
        if len(left) + len(right) > 7:
            raise InvalidAddress(f"too many groups in {text!r}")
        groups = left + [0] * (8 - len(left) - len(right)) + right
    else:
        groups = _parse_groups(text, text, allow_v4=True)
        if len(groups) != 8:
            raise InvalidAddress(f"expected 8 groups in {text!r}, got {len(groups)}")
    return Ipv6Addr.from_groups(groups)


def format_addr(a: Ipv6Addr) -> str:
    groups = a.groups
    best_start, best_len = -1, 0
    i = 0
    while i < 8:
        if groups[i] == 0:
            j = i
            while j < 8 and groups[j] == 0:
                j += 1
            if j - i > best_len:
                best_start, best_len = i, j - i
            i = j
        else:
            i += 1
    text = [f"{g:x}" for g in groups]
    if best_len < 2:
        return ":".join(text)
    head = ":".join(text[:best_start])
    tail = ":".join(text[best_start + best_len:])
    return f"{head}::{tail}"


def classify_addr(a: Ipv6Addr) -> AddressClass:
    top = a.value >> 120
    if top == 0xFF:
        return AddressClass.MULTICAST
    if (a.value >> 118) == (0xFE80 >> 6):
        return AddressClass.LINK_LOCAL
    if (a.value >> 125) == 0b001:
        return AddressClass.GLOBAL_UNICAST
    return AddressClass.OTHER


def as_addr(value) -> Ipv6Addr:
    """Coerce text, bytes or an :class:`Ipv6Addr` into an :class:`Ipv6Addr`."""
    if isinstance(value, Ipv6Addr):
        return value
    if isinstance(value, str):
        return parse_addr(value)
    if isinstance(value, (bytes, bytearray)):
        return Ipv6Addr.from_bytes(bytes(value))
    if isinstance(value, int):
        return Ipv6Addr(value)
    raise TypeError(f"cannot interpret {value!r} as an IPv6 address")
