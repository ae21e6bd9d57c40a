"""Classic libpcap container reading and writing.

Files are written little-endian with magic 0xa1b2c3d4, version 2.4,
snaplen 65535 and linktype 229 (raw IPv6).  Reading accepts either byte
order, the nanosecond-resolution magic, and linktypes 229, 101 (raw IP)
and 1 (Ethernet; only ethertype 0x86DD frames are kept).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BadMagic, Truncated
from .packet import Packet, parse_packet, serialize_packet

MAGIC = 0xA1B2C3D4
MAGIC_NS = 0xA1B23C4D
VERSION = (2, 4)
SNAPLEN = 65535

LINKTYPE_ETHERNET = 1
LINKTYPE_RAW = 101
LINKTYPE_IPV6 = 229

ETHERTYPE_IPV6 = 0x86DD

GLOBAL_HEADER_LEN = 24
RECORD_HEADER_LEN = 16


@dataclass(frozen=True)
class PcapRecord:
    ts_sec: int
    ts_usec: int
    data: bytes
    orig_len: int | None = None

    @property
    def wire_len(self) -> int:
        return len(self.data) if self.orig_len is None else self.orig_len


@dataclass
class PcapFile:
    linktype: int = LINKTYPE_IPV6
    snaplen: int = SNAPLEN
    records: list[PcapRecord] = field(default_factory=list)
    magic: int = MAGIC
    version: tuple[int, int] = VERSION
    byteorder: str = "<"

    def to_bytes(self) -> bytes:
        e = self.byteorder
        out = [struct.pack(e + "IHHiIII", self.magic, self.version[0], self.version[1],
                           0, 0, self.snaplen, self.linktype)]
        for r in self.records:
            out.append(struct.pack(e + "IIII", r.ts_sec, r.ts_usec, len(r.data), r.wire_len))
            out.append(r.data)
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "PcapFile":
        if len(data) < GLOBAL_HEADER_LEN:
            raise Truncated(f"pcap global header needs 24 octets, got {len(data)}")
        for e in "<>":
            (magic,) = struct.unpack_from(e + "I", data)
            if magic in (MAGIC, MAGIC_NS):
                break
        else:
            raise BadMagic(f"unrecognised pcap magic {data[:4].hex()}")
        _, vmaj, vmin, _, _, snaplen, linktype = struct.unpack_from(e + "IHHiIII", data)
        pf = cls(linktype=linktype, snaplen=snaplen, magic=magic,
                 version=(vmaj, vmin), byteorder=e)
        off = GLOBAL_HEADER_LEN
        while off < len(data):
            if len(data) - off < RECORD_HEADER_LEN:
                raise Truncated(f"partial record header at offset {off}")
            ts_sec, ts_usec, incl, orig = struct.unpack_from(e + "IIII", data, off)
            off += RECORD_HEADER_LEN
            if len(data) - off < incl:
                raise Truncated(f"record at offset {off} claims {incl} octets, "
                                f"{len(data) - off} remain")
            pf.records.append(PcapRecord(ts_sec, ts_usec, bytes(data[off:off + incl]),
                                         None if orig == incl else orig))
            off += incl
        return pf


def record_ipv6_bytes(record: PcapRecord, linktype: int) -> bytes | None:
    """Strip link-layer framing; ``None`` when the frame does not carry IPv6."""
    data = record.data
    if linktype == LINKTYPE_IPV6:
        return data
    if linktype == LINKTYPE_RAW:
        return data if data and data[0] >> 4 == 6 else None
    if linktype == LINKTYPE_ETHERNET:
        if len(data) < 14:
            raise Truncated("Ethernet frame shorter than 14 octets")
        (ethertype,) = struct.unpack_from("!H", data, 12)
        return data[14:] if ethertype == ETHERTYPE_IPV6 else None
    raise BadMagic(f"unsupported linktype {linktype}")


def _timestamps(n: int, start: float, step: float):
    for i in range(n):
        usec_total = round((start + i * step) * 1_000_000)
        yield divmod(usec_total, 1_000_000)


def packets_to_pcap(packets, *, start: float = 0.0, step: float = 0.001) -> PcapFile:
    packets = list(packets)
    records = [PcapRecord(sec, usec, serialize_packet(p))
               for p, (sec, usec) in zip(packets, _timestamps(len(packets), start, step))]
    return PcapFile(records=records)


def pcap_write(packets, path, *, start: float = 0.0, step: float = 0.001) -> None:
    """Write ``packets`` to ``path`` as raw-IPv6 records.

    Timestamps are synthetic (``start + i * step`` seconds) so output is
    deterministic.
    """
    Path(path).write_bytes(packets_to_pcap(packets, start=start, step=step).to_bytes())


def pcap_packets(pf: PcapFile) -> list[Packet]:
    out = []
    for r in pf.records:
        raw = record_ipv6_bytes(r, pf.linktype)
        if raw is not None:
            out.append(parse_packet(raw))
    return out


def pcap_read(path) -> list[Packet]:
    return pcap_packets(PcapFile.from_bytes(Path(path).read_bytes()))
