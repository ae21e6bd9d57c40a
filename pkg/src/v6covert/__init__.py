"""IPv6 covert-channel toolkit: encoders/decoders, detectors and rule generation."""

from .addr import AddressClass, Ipv6Addr, classify_addr, format_addr, parse_addr
from .packet import (Icmpv6Echo, Icmpv6NeighborMsg, Ipv6Header, Packet, RawBytes,
                     icmpv6_checksum, parse_packet, serialize_packet, verify_icmpv6_checksum)
from .pcap import pcap_read, pcap_write

__version__ = "0.1.0"

__all__ = [
    "AddressClass", "Ipv6Addr", "classify_addr", "format_addr", "parse_addr",
    "Icmpv6Echo", "Icmpv6NeighborMsg", "Ipv6Header", "Packet", "RawBytes",
    "icmpv6_checksum", "parse_packet", "serialize_packet", "verify_icmpv6_checksum",
    "pcap_read", "pcap_write",
]
