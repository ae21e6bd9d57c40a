"""Streaming detectors for the four covert channels.

Packet detectors expose ``feed(index, packet)`` and ``finish()`` and keep
per-key state (a flow, an echo identifier, a solicitation prefix).  State
for a key is evaluated and dropped once ``window`` packets pass without
activity on it, or at end of stream.
"""

from __future__ import annotations

from ..addr import UNSPECIFIED, AddressClass, classify_addr
from ..channels.config import STOCK_PAYLOAD, Channel
from ..channels.dns import AaaaRecord
from ..packet import Icmpv6Echo, Icmpv6NeighborMsg, Packet
from .findings import SCORE_FULL, SCORE_PARTIAL, DetectionFinding, DetectorThresholds

_EVIDENCE_ITEMS = 12


def _hexlist(values) -> str:
    values = list(values)
    head = ",".join(f"{v:#x}" for v in values[:_EVIDENCE_ITEMS])
    return head + (f",... ({len(values)} total)" if len(values) > _EVIDENCE_ITEMS else "")


class _KeyedDetector:
    def __init__(self, th: DetectorThresholds = DetectorThresholds()):
        self.th = th
        self.state: dict = {}
        self.last_seen: dict = {}
        self.findings: list[DetectionFinding] = []

    def _touch(self, key, index):
        self.last_seen[key] = index

    def _expire(self, index):
        if index % self.th.window:
            return
        stale = [k for k, last in self.last_seen.items() if index - last > self.th.window]
        for k in stale:
            self._close(k)

    def _close(self, key):
        st = self.state.pop(key, None)
        self.last_seen.pop(key, None)
        if st is not None:
            f = self._evaluate(key, st)
            if f is not None:
                self.findings.append(f)

    def feed(self, index: int, p: Packet) -> None:
        self._expire(index)
        self._feed(index, p)

    def finish(self) -> list[DetectionFinding]:
        for k in list(self.state):
            self._close(k)
        self.findings.sort(key=lambda f: f.packet_indices[0])
        return self.findings

    def run(self, src) -> list[DetectionFinding]:
        for i, p in enumerate(src):
            self.feed(i, p)
        return self.finish()


class FlowLabelDetector(_KeyedDetector):
    """Runs of varying non-zero flow labels on one src -> dst flow."""

    def _feed(self, index, p):
        key = (p.src, p.dst)
        st = self.state.get(key)
        label = p.flow_label
        if label:
            if st is None:
                st = self.state[key] = {"run": [], "labels": [], "pending": []}
            st["run"].extend(st["pending"])
            st["pending"].clear()
            st["run"].append(index)
            st["labels"].append(label)
            self._touch(key, index)
        elif st is not None:
            st["pending"].append(index)
            self._touch(key, index)
            if len(st["pending"]) > self.th.fl_max_zero_gap:
                self._close(key)

    def _evaluate(self, key, st):
        run, labels = st["run"], st["labels"]
        distinct = len(set(labels))
        if len(run) < self.th.fl_min_run or distinct < self.th.fl_min_distinct_labels:
            return None
        src, dst = key
        return DetectionFinding(
            Channel.FLOW_LABEL, src, dst, tuple(run),
            f"{distinct} distinct flow labels over {len(run)} packets: {_hexlist(labels)}",
            SCORE_FULL)


class EchoDetector(_KeyedDetector):
    """Echo requests sharing an identifier whose sequence numbers do not count up by one."""

    def _feed(self, index, p):
        pl = p.payload
        if not (isinstance(pl, Icmpv6Echo) and pl.is_request):
            return
        key = (p.src, p.dst, pl.identifier)
        st = self.state.setdefault(key, {"idx": [], "seq": [], "stock": True})
        st["idx"].append(index)
        st["seq"].append(pl.sequence)
        st["stock"] = st["stock"] and pl.data == STOCK_PAYLOAD
        self._touch(key, index)

    def _evaluate(self, key, st):
        seqs = st["seq"]
        if len(seqs) < self.th.echo_min_same_id:
            return None
        gaps = [(b - a) & 0xFFFF for a, b in zip(seqs, seqs[1:])]
        if all(g == 1 for g in gaps):
            return None
        src, dst, ident = key
        odd = sum(g != 1 for g in gaps)
        mimic = "stock ping6 payload" if st["stock"] else "non-stock payload"
        return DetectionFinding(
            Channel.ICMP_ECHO_SEQ, src, dst, tuple(st["idx"]),
            f"id {ident:#06x}: {len(seqs)} requests, {odd}/{len(gaps)} non-unit sequence "
            f"gaps, {mimic}; seq {_hexlist(seqs)}",
            SCORE_FULL if st["stock"] else SCORE_PARTIAL)


class NsDetector(_KeyedDetector):
    """Many distinct, unanswered solicitation targets from one source in one /64."""

    def __init__(self, th: DetectorThresholds = DetectorThresholds()):
        super().__init__(th)
        self.answered: set = set()

    def _feed(self, index, p):
        pl = p.payload
        if not isinstance(pl, Icmpv6NeighborMsg):
            return
        if not pl.is_solicitation:
            self.answered.add(pl.target)
            return
        key = (p.src, pl.target.prefix(64))
        st = self.state.setdefault(key, {"idx": [], "targets": {}, "dst": p.dst})
        st["idx"].append(index)
        st["targets"].setdefault(pl.target, index)
        self._touch(key, index)

    def _evaluate(self, key, st):
        unanswered = [t for t in st["targets"] if t not in self.answered]
        if len(unanswered) < self.th.ns_min_distinct_targets:
            return None
        src, prefix = key
        return DetectionFinding(
            Channel.NS_TARGET, src, st["dst"], tuple(st["idx"]),
            f"{len(unanswered)} distinct unanswered targets in {prefix}/64, "
            f"none advertised; first {unanswered[0]}",
            SCORE_FULL)


def detect_flowlabel(src, th: DetectorThresholds = DetectorThresholds()):
    return FlowLabelDetector(th).run(src)


def detect_echo_covert(src, th: DetectorThresholds = DetectorThresholds()):
    return EchoDetector(th).run(src)


def detect_ns_covert(src, th: DetectorThresholds = DetectorThresholds()):
    return NsDetector(th).run(src)


def detect_packets(src, th: DetectorThresholds = DetectorThresholds()):
    """Run every packet detector in one pass; findings ordered by first packet."""
    dets = [FlowLabelDetector(th), EchoDetector(th), NsDetector(th)]
    for i, p in enumerate(src):
        for d in dets:
            d.feed(i, p)
    out = [f for d in dets for f in d.finish()]
    out.sort(key=lambda f: (f.packet_indices[0], f.channel_suspected.value))
    return out


SIBLING_LIMIT = 3


def detect_dns_covert(records: list[AaaaRecord]) -> list[DetectionFinding]:
    """Flag record groups with unallocated-looking addresses or more than three
    siblings that differ only by a leading decimal index."""
    groups: dict[str, list[int]] = {}
    indexed: dict[str, int] = {}
    records = list(records)
    for i, r in enumerate(records):
        labels = r.labels
        parent = ".".join(labels[1:]) if r.index is not None and len(labels) > 1 else r.owner
        groups.setdefault(parent, []).append(i)
        if r.index is not None:
            indexed[parent] = indexed.get(parent, 0) + 1

    findings = []
    for parent, idx in groups.items():
        odd = [i for i in idx if classify_addr(records[i].addr) is AddressClass.OTHER]
        siblings = indexed.get(parent, 0)
        reasons = []
        if odd:
            reasons.append(f"{len(odd)} address(es) outside allocated space, "
                           f"e.g. {records[odd[0]].addr}")
        if siblings > SIBLING_LIMIT:
            reasons.append(f"{siblings} index-numbered siblings under {parent}")
        if reasons:
            findings.append(DetectionFinding(Channel.DNS_AAAA, UNSPECIFIED, UNSPECIFIED,
                                             tuple(idx), "; ".join(reasons), SCORE_FULL))
    findings.sort(key=lambda f: f.packet_indices[0])
    return findings
