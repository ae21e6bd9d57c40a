from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..addr import Ipv6Addr, as_addr

# 56 data octets copied from a stock ping6 echo request
STOCK_PAYLOAD = bytes.fromhex(
    "1e382c5f000000004434010000000000"
    "101112131415161718191a1b1c1d1e1f"
    "202122232425262728292a2b2c2d2e2f"
    "3031323334353637"
)

DEFAULT_SRC = Ipv6Addr.parse("2001:db8::1")
DEFAULT_DST = Ipv6Addr.parse("2001:db8::2")
LINK_LOCAL_PREFIX = Ipv6Addr.parse("fe80::")


class Channel(enum.Enum):
    FLOW_LABEL = "FlowLabel"
    ICMP_ECHO_SEQ = "IcmpEchoSeq"
    NS_TARGET = "NsTarget"
    DNS_AAAA = "DnsAaaa"
    DISCOVERY = "Discovery"


@dataclass(frozen=True)
class ChannelConfig:
    xor_key: int = 0x17
    icmp_id: int = 0x1337
    src: Ipv6Addr = DEFAULT_SRC
    dst: Ipv6Addr = DEFAULT_DST
    ns_prefix: Ipv6Addr = LINK_LOCAL_PREFIX
    stock_payload: bytes = STOCK_PAYLOAD
    hop_limit: int = 64

    def __post_init__(self):
        if not 0 <= self.xor_key <= 0xFF:
            raise ValueError(f"xor_key must be one octet, got {self.xor_key:#x}")
        if not 0 <= self.icmp_id <= 0xFFFF:
            raise ValueError(f"icmp_id must be 16 bits, got {self.icmp_id:#x}")
        if len(self.stock_payload) != 56:
            raise ValueError(f"stock payload must be 56 octets, got {len(self.stock_payload)}")
        object.__setattr__(self, "src", as_addr(self.src))
        object.__setattr__(self, "dst", as_addr(self.dst))
        # only the /64 matters
        object.__setattr__(self, "ns_prefix", as_addr(self.ns_prefix).prefix(64))


@dataclass(frozen=True)
class Transmission:
    """Ordered output of one encoder run."""

    channel: Channel
    packets: list = field(default_factory=list)
    payload_octets: int = 0
    framing: object = None

    def __iter__(self):
        return iter(self.packets)

    def __len__(self):
        return len(self.packets)
