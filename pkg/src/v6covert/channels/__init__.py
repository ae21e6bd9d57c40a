"""Encoder/decoder pairs for the four covert channels."""

from .config import STOCK_PAYLOAD, Channel, ChannelConfig, Transmission
from .dns import (AaaaRecord, DnsUpdateScript, dns_decode, dns_encode, dns_transmission,
                  emit_nsupdate, parse_nsupdate)
from .echo import EchoReceiver, echo_decode, echo_encode, echo_expected_decode, echo_roundtrips
from .flowlabel import FlowLabelFraming, fl_decode, fl_encode
from .ns import ns_decode, ns_encode

__all__ = [
    "STOCK_PAYLOAD", "Channel", "ChannelConfig", "Transmission",
    "AaaaRecord", "DnsUpdateScript", "dns_decode", "dns_encode", "dns_transmission",
    "emit_nsupdate", "parse_nsupdate",
    "EchoReceiver", "echo_decode", "echo_encode", "echo_expected_decode", "echo_roundtrips",
    "FlowLabelFraming", "fl_decode", "fl_encode",
    "ns_decode", "ns_encode",
]
