"""Closed-form versus solved sewing coefficients c_{k,j}, with the M(1) relation check.

    python scripts/sewing_coefficients.py [kmax]
"""
import sys

from voapart.casimir import gamma_qp_relation_check, printed_coefficient, true_coefficient
from voapart.models import heisenberg

kmax = int(sys.argv[1]) if len(sys.argv) > 1 else 3
print(" k  j  closed  solved")
for k in range(kmax + 1):
    for j in range(min(k, 1), k + 1):
        print(f"{k:2d} {j:2d}  {str(printed_coefficient(k, j)):>7}  {true_coefficient(k, j)}")
for k in range(min(kmax, 3) + 1):
    print(gamma_qp_relation_check(heisenberg(1), k, [(3, 1), (5, 2)]).summary())
