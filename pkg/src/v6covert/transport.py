"""Packet plumbing: loopback pairs, pcap-backed sources/sinks, filter predicates.

A *source* is any iterable of :class:`~v6covert.packet.Packet`; a *sink* has
``write(packet)`` and ``close()``.  Live raw-socket adapters would follow
the same two shapes; none ship here because the tested build stays
unprivileged and offline.
"""

from __future__ import annotations

import struct
import threading
from collections import deque
from pathlib import Path
from typing import Callable, Iterable, Iterator, Protocol

from .addr import as_addr
from .errors import CapacityExceeded
from .packet import (ICMPV6_ECHO_REQUEST, Icmpv6Echo, Icmpv6NeighborMsg, Packet,
                     serialize_packet)
from .pcap import (GLOBAL_HEADER_LEN, LINKTYPE_IPV6, MAGIC, SNAPLEN, VERSION, PcapFile,
                   pcap_packets)

DEFAULT_CAPACITY = 65536


class PacketSink(Protocol):
    def write(self, packet: Packet) -> None: ...
    def close(self) -> None: ...


PacketSource = Iterable[Packet]


class _Channel:
    def __init__(self, capacity: int):
        self.capacity = capacity
        self.buf: deque[Packet] = deque()
        self.closed = False
        self.cond = threading.Condition()


class LoopbackSink:
    def __init__(self, chan: _Channel):
        self._chan = chan

    def write(self, packet: Packet) -> None:
        c = self._chan
        with c.cond:
            if c.closed:
                raise ValueError("write to closed loopback sink")
            if len(c.buf) >= c.capacity:
                raise CapacityExceeded(f"loopback capacity {c.capacity} reached")
            c.buf.append(packet)
            c.cond.notify()

    def close(self) -> None:
        with self._chan.cond:
            self._chan.closed = True
            self._chan.cond.notify_all()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class LoopbackSource:
    def __init__(self, chan: _Channel):
        self._chan = chan

    def read(self, timeout: float | None = None) -> Packet | None:
        """Next packet, or ``None`` at end of stream (sink closed and drained)."""
        c = self._chan
        with c.cond:
            while not c.buf and not c.closed:
                if not c.cond.wait(timeout):
                    raise TimeoutError("no packet within timeout")
            return c.buf.popleft() if c.buf else None

    def __iter__(self) -> Iterator[Packet]:
        while (p := self.read()) is not None:
            yield p


def loopback(capacity: int = DEFAULT_CAPACITY) -> tuple[LoopbackSink, LoopbackSource]:
    if capacity < 1:
        raise ValueError("capacity must be >= 1")
    chan = _Channel(capacity)
    return LoopbackSink(chan), LoopbackSource(chan)


class FilterPredicate:
    """Composable packet predicate: combine with ``&``, ``|`` and ``~``."""

    def __init__(self, fn: Callable[[Packet], bool], name: str = "pred"):
        self.fn = fn
        self.name = name

    def __call__(self, p: Packet) -> bool:
        return bool(self.fn(p))

    def __and__(self, other: "FilterPredicate") -> "FilterPredicate":
        return FilterPredicate(lambda p: self(p) and other(p), f"({self.name} and {other.name})")

    def __or__(self, other: "FilterPredicate") -> "FilterPredicate":
        return FilterPredicate(lambda p: self(p) or other(p), f"({self.name} or {other.name})")

    def __invert__(self) -> "FilterPredicate":
        return FilterPredicate(lambda p: not self(p), f"not {self.name}")

    def __repr__(self) -> str:
        return f"FilterPredicate({self.name})"


ANY = FilterPredicate(lambda p: True, "true")
is_ipv6 = FilterPredicate(lambda p: True, "ip6")
is_icmpv6 = FilterPredicate(lambda p: p.is_icmpv6, "icmp6")
not_icmpv6 = ~is_icmpv6
is_echo_request = FilterPredicate(
    lambda p: isinstance(p.payload, Icmpv6Echo) and p.payload.msg_type == ICMPV6_ECHO_REQUEST,
    "echo-request")
is_neighbor_msg = FilterPredicate(lambda p: isinstance(p.payload, Icmpv6NeighborMsg),
                                  "nd-neighbor")


def src_is(addr) -> FilterPredicate:
    a = as_addr(addr)
    return FilterPredicate(lambda p: p.src == a, f"src {a}")


def dst_is(addr) -> FilterPredicate:
    a = as_addr(addr)
    return FilterPredicate(lambda p: p.dst == a, f"dst {a}")


def filtered(src: PacketSource, pred: FilterPredicate) -> Iterator[Packet]:
    return (p for p in src if pred(p))


def pcap_source(path) -> Iterator[Packet]:
    """Packets of a pcap file in record order.  Opens (and fails) eagerly."""
    data = Path(path).read_bytes()
    return iter(pcap_packets(PcapFile.from_bytes(data)))


class PcapSink:
    """Streams records to ``path``; the file is valid after every write."""

    def __init__(self, path, *, step: float = 0.001):
        self.path = Path(path)
        self._fh = open(self.path, "wb")
        self._fh.write(struct.pack("<IHHiIII", MAGIC, VERSION[0], VERSION[1], 0, 0,
                                   SNAPLEN, LINKTYPE_IPV6))
        assert self._fh.tell() == GLOBAL_HEADER_LEN
        self._step_us = round(step * 1_000_000)
        self.count = 0

    def write(self, packet: Packet) -> None:
        raw = serialize_packet(packet)
        sec, usec = divmod(self.count * self._step_us, 1_000_000)
        self._fh.write(struct.pack("<IIII", sec, usec, len(raw), len(raw)) + raw)
        self.count += 1

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def pcap_sink(path, **kw) -> PcapSink:
    return PcapSink(path, **kw)
