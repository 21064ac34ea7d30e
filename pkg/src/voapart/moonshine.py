"""Graded dimensions of the moonshine module from stored j-coefficients.

Only genus-one data is available: Tr_{V} q^(L_0 - 1) = j(q) - 744.  The stored
table is checked against ``j_eta_quotient``, which recomputes j = E_4^3 / Delta
with Delta = q prod (1 - q^n)^24.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .errors import ShapeError


@lru_cache(maxsize=None)
def _table() -> tuple:
    ref = resources.files("voapart") / "data" / "j_coefficients.json"
    return tuple(int(x) for x in json.loads(ref.read_text())["coefficients"])


def j_coefficients(N: int) -> list[int]:
    """[c(0), ..., c(N)] with j(q) = q^-1 + sum_{m>=0} c(m) q^m (stored values)."""
    tab = _table()
    if N + 1 >= len(tab):
        raise ShapeError(f"stored j-coefficients reach only q^{len(tab) - 2}")
    return list(tab[1: N + 2])


def j_eta_quotient(N: int) -> list[int]:
    """Independent recomputation of [c(0), ..., c(N)] from E_4^3 / eta^24."""
    M = N + 2

    def mul(a, b):
        out = [0] * M
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b[: M - i]):
                    out[i + k] += x * y
        return out

    e4 = [1] + [240 * sum(d ** 3 for d in range(1, n + 1) if n % d == 0) for n in range(1, M)]
    num = mul(mul(e4, e4), e4)
    prod = [1] + [0] * (M - 1)
    for n in range(1, M):
        for _ in range(24):
            prod = [prod[i] - (prod[i - n] if i >= n else 0) for i in range(M)]
    inv = [1] + [0] * (M - 1)
    for k in range(1, M):
        inv[k] = -sum(prod[i] * inv[k - i] for i in range(1, k + 1))
    jq = mul(num, inv)  # coefficients of q * j(q)
    return jq[1: N + 2]
