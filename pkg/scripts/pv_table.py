"""PV filtration of M(1) up to a cutoff, next to the even-part partition counts.

    python scripts/pv_table.py [W] [window]
"""
import sys
import time

from voapart.casimir import pv_filtration, trace_orthogonality_check
from voapart.models import heisenberg


def even_count(n, top=None, parts=0):
    top = n if top is None else top
    if n == 0:
        return int(parts % 2 == 0)
    return sum(even_count(n - p, p, parts + 1) for p in range(min(n, top), 0, -1))


W = int(sys.argv[1]) if len(sys.argv) > 1 else 6
window = int(sys.argv[2]) if len(sys.argv) > 2 else 2
M1 = heisenberg(1)
t0 = time.time()
pv = pv_filtration(M1, W, window=window)
print(f"cutoff {W}, window {window}, stable={pv.stable}, {time.time() - t0:.1f}s")
print(" n  dim V_n  dim PV_n  even-part partitions")
for n, (dv, dp) in enumerate(zip(pv.dims_v, pv.dims)):
    print(f"{n:2d}  {dv:7d}  {dp:8d}  {even_count(n):5d}")
for d in range(4):
    print(trace_orthogonality_check(M1, d, min(4, W), pv).summary())
