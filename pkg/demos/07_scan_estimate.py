"""
How long does a brute-force sweep take?
=======================================
"""

from v6covert.detect import estimate_scan

# a /24 at the same rate as a slow ping sweep
print("/24 at 256 probes per 300 s:", estimate_scan(8, 256 / 300).human_readable)

# a single IPv6 /64 at one probe per second
print("/64 at 1 probe/s:", estimate_scan(64, 1).human_readable)

for rate in (1e3, 1e6, 1e9):
    print(f"/64 at {rate:.0e} probes/s:", estimate_scan(64, rate).human_readable)
