"""Genus-2 theta coefficients of D16+ and E8+E8, keyed by the reduced matrix (a, b, c).

The two series agree on every key up to the chosen diagonal bound.

    python scripts/genus2_theta.py [maxT]
"""
import sys
import time

from voapart.lattice import load_lattice, theta_genus2

maxT = int(sys.argv[1]) if len(sys.argv) > 1 else 2
res = {}
for name in ("D16plus", "E8E8"):
    t0 = time.time()
    res[name] = theta_genus2(load_lattice(name), maxT)
    print(f"{name}: {len(res[name])} coefficients in {time.time() - t0:.1f}s")
keys = sorted(set(res["D16plus"]) | set(res["E8E8"]))
diff = [k for k in keys if res["D16plus"].get(k, 0) != res["E8E8"].get(k, 0)]
for k in keys:
    print("(" + ", ".join(map(str, k)) + ")", res["D16plus"].get(k, 0), res["E8E8"].get(k, 0))
print("identical" if not diff else f"differ at {diff}")
