"""Brute-force scan cost: probing every host address of a subnet at a fixed rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

MINUTE = 60
HOUR = 3600
DAY = 86400
YEAR = 31_557_600  # Julian year, 365.25 days


@dataclass(frozen=True)
class ScanEstimate:
    address_count: int
    seconds: float
    human_readable: str


def _sci(x: float) -> str:
    exp = math.floor(math.log10(x))
    mant = x / 10 ** exp
    if round(mant, 2) >= 10:
        mant, exp = mant / 10, exp + 1
    return f"{mant:.2f}e{exp}"


def _num(x: float) -> str:
    if x >= 1e6:
        return _sci(x)
    return f"{x:.0f}" if x >= 100 else f"{x:.1f}"


def humanize(seconds: float) -> str:
    if seconds < MINUTE:
        return f"{seconds:.3g} s"
    secs = _sci(seconds) if seconds >= 1e6 else f"{seconds:.0f}"
    if seconds < HOUR:
        unit = f"{seconds / MINUTE:.1f} minutes"
    elif seconds < DAY:
        unit = f"{seconds / HOUR:.1f} hours"
    elif seconds < YEAR:
        unit = f"{seconds / DAY:.1f} days"
    else:
        unit = f"~{_num(seconds / YEAR)} years"
    return f"{secs} s ({unit})"


def estimate_scan(host_bits: int, probes_per_second: float) -> ScanEstimate:
    """Time to probe all ``2**host_bits`` addresses at ``probes_per_second``.

    >>> estimate_scan(8, 256 / 300).human_readable
    '300 s (5.0 minutes)'
    """
    if not 0 <= host_bits <= 128:
        raise ValueError(f"host_bits must be in [0, 128], got {host_bits}")
    if not probes_per_second > 0:
        raise ValueError("probes_per_second must be positive")
    count = 1 << host_bits
    seconds = count / probes_per_second
    return ScanEstimate(count, seconds, humanize(seconds))
