from __future__ import annotations

import json
from dataclasses import dataclass, fields

from ..addr import UNSPECIFIED, Ipv6Addr
from ..channels.config import Channel

SCORE_FULL = 0.9
SCORE_PARTIAL = 0.6


@dataclass(frozen=True)
class DetectorThresholds:
    fl_min_run: int = 5
    fl_min_distinct_labels: int = 4
    # zero-label packets tolerated inside a run (gzip headers/trailers contain zero chunks)
    fl_max_zero_gap: int = 3
    echo_min_same_id: int = 4
    ns_min_distinct_targets: int = 8
    # a key's state is flushed after this many packets without activity for it
    window: int = 1024

    def __post_init__(self):
        for f in fields(self):
            minimum = 0 if f.name == "fl_max_zero_gap" else 1
            if getattr(self, f.name) < minimum:
                raise ValueError(f"{f.name} must be >= {minimum}")

    @classmethod
    def from_mapping(cls, data: dict) -> "DetectorThresholds":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown threshold fields: {sorted(unknown)}")
        return cls(**{k: int(v) for k, v in data.items()})


@dataclass(frozen=True)
class DetectionFinding:
    channel_suspected: Channel
    src: Ipv6Addr
    dst: Ipv6Addr
    packet_indices: tuple[int, ...]
    evidence: str
    score: float

    def __post_init__(self):
        if not self.packet_indices:
            raise ValueError("a finding must cite at least one packet")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "channel_suspected": self.channel_suspected.value,
            "src": str(self.src),
            "dst": str(self.dst),
            "packet_indices": list(self.packet_indices),
            "evidence": self.evidence,
            "score": self.score,
        }

    def to_line(self) -> str:
        idx = self.packet_indices
        span = f"{idx[0]}-{idx[-1]}" if len(idx) > 1 else f"{idx[0]}"
        return (f"{self.channel_suspected.value}\t{self.src} -> {self.dst}\t"
                f"packets={len(idx)} [{span}]\tscore={self.score:.2f}\t{self.evidence}")


def render_text(findings) -> str:
    return "".join(f.to_line() + "\n" for f in findings)


def render_json(findings) -> str:
    """``{"findings": [{"channel", "src", "dst", "indices", "evidence", "score"}, ...]}``"""
    return json.dumps({"findings": [f.to_dict() for f in findings]}, indent=2) + "\n"


__all__ = ["DetectorThresholds", "DetectionFinding", "render_text", "render_json",
           "SCORE_FULL", "SCORE_PARTIAL", "UNSPECIFIED"]
