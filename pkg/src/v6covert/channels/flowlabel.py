"""Flow-label channel: gzip the message and carry it 20 bits per packet.

Wire layout of one transmission (all packets ``next_header`` 59)::

    start   flow_label = start_magic   payload = !II (bit_count, packet_count)
    data    flow_label = chunk[i]      payload = empty        (packet_count of these)
    end     flow_label = end_magic     payload = !II (bit_count, packet_count)

Chunks are taken MSB-first from the compressed stream; the last one is
zero-padded in its low bits.  Because a data chunk may legitimately equal
either magic value, markers are recognised by label *and* by carrying the
8-octet counter payload.
"""

from __future__ import annotations

import gzip
import math
import struct
import zlib
from dataclasses import dataclass, replace

from ..errors import CountMismatch, DecompressError, MessageTooLarge, MissingEnd, MissingStart
from ..packet import FLOW_LABEL_MAX, NH_NONE, Packet, RawBytes
from .config import Channel, ChannelConfig, Transmission

CHUNK_BITS = 20
MAX_MESSAGE = 1 << 20
# compressor operating point; packet counts depend on it
GZIP_LEVEL = 9
GZIP_MTIME = 0

_COUNTERS = struct.Struct("!II")


@dataclass(frozen=True)
class FlowLabelFraming:
    start_magic: int = 0xFFFFE
    end_magic: int = 0xFFFFF
    declared_bit_count: int = 0
    declared_packet_count: int = 0

    def __post_init__(self):
        for name in ("start_magic", "end_magic"):
            v = getattr(self, name)
            if not 0 <= v <= FLOW_LABEL_MAX:
                raise ValueError(f"{name} {v:#x} does not fit in 20 bits")
        if self.start_magic == self.end_magic:
            raise ValueError("start and end magic must differ")
        if self.declared_bit_count < 0:
            raise ValueError("declared_bit_count must be non-negative")
        if self.declared_packet_count != math.ceil(self.declared_bit_count / CHUNK_BITS):
            raise ValueError("declared_packet_count must equal ceil(bits / 20)")


def compress(msg: bytes) -> bytes:
    return gzip.compress(bytes(msg), compresslevel=GZIP_LEVEL, mtime=GZIP_MTIME)


def split_chunks(data: bytes) -> list[int]:
    nbits = 8 * len(data)
    n = math.ceil(nbits / CHUNK_BITS)
    value = int.from_bytes(data, "big") << (n * CHUNK_BITS - nbits)
    return [(value >> (CHUNK_BITS * (n - 1 - i))) & FLOW_LABEL_MAX for i in range(n)]


def join_chunks(chunks: list[int], nbits: int) -> bytes:
    value = 0
    for c in chunks:
        value = (value << CHUNK_BITS) | c
    value >>= len(chunks) * CHUNK_BITS - nbits
    return value.to_bytes(nbits // 8, "big")


def fl_encode(msg: bytes, cfg: ChannelConfig = ChannelConfig(),
              framing: FlowLabelFraming = FlowLabelFraming()) -> Transmission:
    if len(msg) > MAX_MESSAGE:
        raise MessageTooLarge(f"{len(msg)} octets exceeds {MAX_MESSAGE}")
    comp = compress(msg)
    chunks = split_chunks(comp)
    nbits = 8 * len(comp)
    framing = replace(framing, declared_bit_count=nbits, declared_packet_count=len(chunks))
    counters = RawBytes(_COUNTERS.pack(nbits, len(chunks)))

    def pkt(label, payload=RawBytes()):
        return Packet.build(payload, src=cfg.src, dst=cfg.dst, hop_limit=cfg.hop_limit,
                            flow_label=label, next_header=NH_NONE)

    packets = [pkt(framing.start_magic, counters)]
    packets.extend(pkt(c) for c in chunks)
    packets.append(pkt(framing.end_magic, counters))
    return Transmission(Channel.FLOW_LABEL, packets, len(msg), framing)


def _marker_counts(p: Packet, magic: int):
    if (p.header.next_header == NH_NONE and p.flow_label == magic
            and isinstance(p.payload, RawBytes) and len(p.payload.data) == _COUNTERS.size):
        return _COUNTERS.unpack(p.payload.data)
    return None


def fl_decode(packets, framing: FlowLabelFraming = FlowLabelFraming()) -> bytes:
    """Reassemble the message from a packet stream containing one transmission.

    Packets from other src/dst pairs between the markers are ignored.
    """
    it = iter(packets)
    for p in it:
        counts = _marker_counts(p, framing.start_magic)
        if counts is not None:
            start = p
            break
    else:
        raise MissingStart(f"no start marker with flow label {framing.start_magic:#x}")
    nbits, npackets = counts

    chunks = []
    for p in it:
        if p.src != start.src or p.dst != start.dst or p.header.next_header != NH_NONE:
            continue
        if _marker_counts(p, framing.end_magic) is not None:
            break
        if isinstance(p.payload, RawBytes) and not p.payload.data:
            chunks.append(p.flow_label)
    else:
        raise MissingEnd(f"no end marker with flow label {framing.end_magic:#x}")

    if len(chunks) != npackets or npackets != math.ceil(nbits / CHUNK_BITS):
        raise CountMismatch(f"declared {npackets} packets / {nbits} bits, "
                            f"received {len(chunks)} packets")
    if nbits % 8:
        raise DecompressError(f"bit count {nbits} is not a whole number of octets")
    try:
        return gzip.decompress(join_chunks(chunks, nbits))
    except (OSError, EOFError, zlib.error) as exc:
        raise DecompressError(str(exc)) from exc
