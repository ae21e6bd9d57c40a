"""Bit-exact IPv6 / ICMPv6 packet model.

Fixed IPv6 header (40 octets)::

    +-------+---------------+---------------------------------------+
    |Version| Traffic Class |              Flow Label               |
    +-------+---------------+-------+---------------+---------------+
    |        Payload Length         |  Next Header  |   Hop Limit   |
    +-------------------------------+---------------+---------------+
    |                  Source Address (128 bits)                    |
    +---------------------------------------------------------------+
    |               Destination Address (128 bits)                  |
    +---------------------------------------------------------------+

Payloads are one of :class:`RawBytes`, :class:`Icmpv6Echo` or
:class:`Icmpv6NeighborMsg`.  Checksums are derived data: ``serialize_packet``
always recomputes them, and they are excluded from equality so that
``parse_packet(serialize_packet(p)) == p``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field, replace
from typing import Union

from .addr import UNSPECIFIED, Ipv6Addr, as_addr
from .errors import NotIpv6, PayloadTooLarge, Truncated

HEADER_LEN = 40
FLOW_LABEL_MAX = (1 << 20) - 1

NH_ICMPV6 = 58
NH_NONE = 59

ICMPV6_ECHO_REQUEST = 128
ICMPV6_ECHO_REPLY = 129
ND_NEIGHBOR_SOLICIT = 135
ND_NEIGHBOR_ADVERT = 136

_HDR = struct.Struct("!IHBB16s16s")


@dataclass(frozen=True, slots=True)
class Ipv6Header:
    version: int = 6
    traffic_class: int = 0
    flow_label: int = 0
    payload_length: int = 0
    next_header: int = NH_NONE
    hop_limit: int = 64
    src: Ipv6Addr = UNSPECIFIED
    dst: Ipv6Addr = UNSPECIFIED

    def __post_init__(self):
        if self.version != 6:
            raise NotIpv6(f"version {self.version} != 6")
        if not 0 <= self.flow_label <= FLOW_LABEL_MAX:
            raise ValueError(f"flow label {self.flow_label:#x} does not fit in 20 bits")
        for name, bits in (("traffic_class", 8), ("next_header", 8),
                           ("hop_limit", 8), ("payload_length", 16)):
            v = getattr(self, name)
            if not 0 <= v < (1 << bits):
                raise ValueError(f"{name}={v} does not fit in {bits} bits")
        object.__setattr__(self, "src", as_addr(self.src))
        object.__setattr__(self, "dst", as_addr(self.dst))

    def to_bytes(self) -> bytes:
        word = (6 << 28) | (self.traffic_class << 20) | self.flow_label
        return _HDR.pack(word, self.payload_length, self.next_header,
                         self.hop_limit, self.src.packed, self.dst.packed)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Ipv6Header":
        if len(data) < HEADER_LEN:
            raise Truncated(f"IPv6 header needs {HEADER_LEN} octets, got {len(data)}")
        word, plen, nh, hop, src, dst = _HDR.unpack_from(data)
        version = word >> 28
        if version != 6:
            raise NotIpv6(f"version field is {version}")
        return cls(version=6, traffic_class=(word >> 20) & 0xFF,
                   flow_label=word & FLOW_LABEL_MAX, payload_length=plen,
                   next_header=nh, hop_limit=hop,
                   src=Ipv6Addr.from_bytes(src), dst=Ipv6Addr.from_bytes(dst))


@dataclass(frozen=True, slots=True)
class RawBytes:
    data: bytes = b""

    def to_bytes(self, src=None, dst=None) -> bytes:
        return bytes(self.data)


@dataclass(frozen=True, slots=True)
class Icmpv6Echo:
    msg_type: int = ICMPV6_ECHO_REQUEST
    code: int = 0
    identifier: int = 0
    sequence: int = 0
    data: bytes = b""
    checksum: int = field(default=0, compare=False)

    def body(self) -> bytes:
        return struct.pack("!BBHHH", self.msg_type, self.code, 0,
                           self.identifier, self.sequence) + bytes(self.data)

    def to_bytes(self, src: Ipv6Addr, dst: Ipv6Addr) -> bytes:
        return _with_checksum(self.body(), src, dst)

    @property
    def is_request(self) -> bool:
        return self.msg_type == ICMPV6_ECHO_REQUEST


@dataclass(frozen=True, slots=True)
class Icmpv6NeighborMsg:
    msg_type: int = ND_NEIGHBOR_SOLICIT
    code: int = 0
    flags_reserved: int = 0
    target: Ipv6Addr = UNSPECIFIED
    options: bytes = b""
    checksum: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "target", as_addr(self.target))

    def body(self) -> bytes:
        return (struct.pack("!BBHI", self.msg_type, self.code, 0, self.flags_reserved)
                + self.target.packed + bytes(self.options))

    def to_bytes(self, src: Ipv6Addr, dst: Ipv6Addr) -> bytes:
        return _with_checksum(self.body(), src, dst)

    @property
    def is_solicitation(self) -> bool:
        return self.msg_type == ND_NEIGHBOR_SOLICIT


Payload = Union[RawBytes, Icmpv6Echo, Icmpv6NeighborMsg]


@dataclass(frozen=True, slots=True)
class Packet:
    header: Ipv6Header
    payload: Payload = RawBytes()
    # set by parse_packet; never part of equality
    checksum_ok: bool = field(default=True, compare=False)
    trailing: int = field(default=0, compare=False)

    @classmethod
    def build(cls, payload: Payload = RawBytes(), *, src=UNSPECIFIED, dst=UNSPECIFIED,
              hop_limit: int = 64, flow_label: int = 0, traffic_class: int = 0,
              next_header: int | None = None) -> "Packet":
        """Construct a packet whose header length and protocol fields agree with
        ``payload``."""
        if next_header is None:
            next_header = NH_NONE if isinstance(payload, RawBytes) else NH_ICMPV6
        length = _payload_length(payload)
        if length > 0xFFFF:
            raise PayloadTooLarge(f"payload of {length} octets exceeds 65535")
        hdr = Ipv6Header(traffic_class=traffic_class, flow_label=flow_label,
                         payload_length=length, next_header=next_header,
                         hop_limit=hop_limit, src=as_addr(src), dst=as_addr(dst))
        return cls(hdr, payload)

    @property
    def src(self) -> Ipv6Addr:
        return self.header.src

    @property
    def dst(self) -> Ipv6Addr:
        return self.header.dst

    @property
    def flow_label(self) -> int:
        return self.header.flow_label

    @property
    def is_icmpv6(self) -> bool:
        return self.header.next_header == NH_ICMPV6

    def to_bytes(self) -> bytes:
        return serialize_packet(self)


def _payload_length(payload: Payload) -> int:
    if isinstance(payload, RawBytes):
        return len(payload.data)
    if isinstance(payload, Icmpv6Echo):
        return 8 + len(payload.data)
    return 24 + len(payload.options)


def _ones_sum(data: bytes) -> int:
    if len(data) % 2:
        data += b"\x00"
    total = sum(struct.unpack(f"!{len(data) // 2}H", data))
    while total >> 16:
        total = (total & 0xFFFF) + (total >> 16)
    return total


def _pseudo_header(src: Ipv6Addr, dst: Ipv6Addr, length: int) -> bytes:
    return src.packed + dst.packed + struct.pack("!I3xB", length, NH_ICMPV6)


def icmpv6_checksum(src, dst, icmp_bytes: bytes) -> int:
    """One's-complement checksum over the IPv6 pseudo-header and the message.

    The checksum field inside ``icmp_bytes`` must already be zero.
    """
    src, dst = as_addr(src), as_addr(dst)
    s = _ones_sum(_pseudo_header(src, dst, len(icmp_bytes)) + bytes(icmp_bytes))
    return ~s & 0xFFFF


def verify_icmpv6_checksum(src, dst, icmp_bytes: bytes) -> bool:
    src, dst = as_addr(src), as_addr(dst)
    return _ones_sum(_pseudo_header(src, dst, len(icmp_bytes)) + bytes(icmp_bytes)) == 0xFFFF


def _with_checksum(body: bytes, src: Ipv6Addr, dst: Ipv6Addr) -> bytes:
    csum = icmpv6_checksum(src, dst, body)
    return body[:2] + csum.to_bytes(2, "big") + body[4:]


def serialize_packet(p: Packet) -> bytes:
    """Wire bytes for ``p``; payload length and ICMPv6 checksum are recomputed."""
    hdr = p.header
    body = p.payload.to_bytes(hdr.src, hdr.dst)
    if len(body) > 0xFFFF:
        raise PayloadTooLarge(f"payload of {len(body)} octets exceeds 65535")
    if hdr.payload_length != len(body):
        hdr = replace(hdr, payload_length=len(body))
    return hdr.to_bytes() + body


def _parse_icmpv6(body: bytes, src: Ipv6Addr, dst: Ipv6Addr) -> tuple[Payload, bool]:
    if len(body) < 4:
        return RawBytes(body), True
    msg_type, code, csum = struct.unpack_from("!BBH", body)
    if msg_type in (ICMPV6_ECHO_REQUEST, ICMPV6_ECHO_REPLY) and len(body) >= 8:
        ident, seq = struct.unpack_from("!HH", body, 4)
        payload = Icmpv6Echo(msg_type, code, ident, seq, bytes(body[8:]), checksum=csum)
    elif msg_type in (ND_NEIGHBOR_SOLICIT, ND_NEIGHBOR_ADVERT) and len(body) >= 24:
        (flags,) = struct.unpack_from("!I", body, 4)
        target = Ipv6Addr.from_bytes(bytes(body[8:24]))
        payload = Icmpv6NeighborMsg(msg_type, code, flags, target, bytes(body[24:]),
                                    checksum=csum)
    else:
        return RawBytes(bytes(body)), True
    return payload, verify_icmpv6_checksum(src, dst, body)


def parse_packet(b: bytes) -> Packet:
    """Inverse of :func:`serialize_packet`.

    Octets beyond ``payload_length`` (capture padding) are dropped and
    counted in ``Packet.trailing``.  A bad ICMPv6 checksum clears
    ``Packet.checksum_ok`` instead of raising.
    """
    b = bytes(b)
    hdr = Ipv6Header.from_bytes(b)
    end = HEADER_LEN + hdr.payload_length
    if len(b) < end:
        raise Truncated(f"payload length {hdr.payload_length} but only "
                        f"{len(b) - HEADER_LEN} octets follow the header")
    body = b[HEADER_LEN:end]
    ok = True
    if hdr.next_header == NH_ICMPV6:
        payload, ok = _parse_icmpv6(body, hdr.src, hdr.dst)
    else:
        payload = RawBytes(body)
    return Packet(hdr, payload, checksum_ok=ok, trailing=len(b) - end)
