"""Sphere correlators (Omega, Y(a_1, x_1) ... Y(a_n, x_n) Omega) at rational points.

Two engines:

* ``wick_correlator``: closed-form free-field contraction (charge prefactor,
  cocycle sign, sum over partial matchings of field legs);
* ``mode_oracle``: the Laurent expansion in |x_1| > ... > |x_n| assembled
  mode by mode from the vertex-operator engine, cleared of poles and
  evaluated exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DomainError, InvariantError, PoleError, ShapeError
from .linalg import axpy


@dataclass(frozen=True)
class Insertion:
    state: dict
    point: Fraction


@dataclass(frozen=True)
class PointConfig:
    """(w_1, z_1, ..., w_g, z_g) with strictly decreasing absolute values."""

    points: tuple

    def __post_init__(self):
        pts = tuple(Fraction(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) % 2:
            raise ShapeError("a PointConfig lists pairs (w_i, z_i)")
        for a, b in zip(pts, pts[1:]):
            if not abs(a) > abs(b):
                raise DomainError(f"points must satisfy |w_1| > |z_1| > ... ; got {a}, {b}")
        if pts and pts[-1] == 0:
            raise DomainError("points must be non-zero")

    @property
    def genus(self) -> int:
        return len(self.points) // 2

    def pairs(self):
        return [(self.points[2 * i], self.points[2 * i + 1]) for i in range(self.genus)]

    def scaled(self, lam) -> "PointConfig":
        return PointConfig(tuple(Fraction(lam) * p for p in self.points))


BUILTIN_POINTS = {
    "g1a": (3, 1),
    "g1b": (5, 2),
    "g2a": (13, 7, 3, 1),
    "g2b": (20, 11, 5, 2),
    "g3a": (40, 27, 13, 7, 3, 1),
}


def builtin_points(name: str) -> PointConfig:
    try:
        return PointConfig(BUILTIN_POINTS[name])
    except KeyError:
        raise ShapeError(f"unknown builtin point set {name!r}") from None


def _as_items(insertions):
    out = []
    for ins in insertions:
        if isinstance(ins, Insertion):
            out.append((ins.state, Fraction(ins.point)))
        else:
            vec, x = ins
            out.append((vec, Fraction(x)))
    return out


def wick_correlator(model, insertions) -> Fraction:
    """Exact correlator of vector insertions [(vec, point) or Insertion, ...]."""
    items = _as_items(insertions)
    xs = [x for _, x in items]
    if len(set(xs)) != len(xs):
        raise PoleError("coincident insertion points")
    return model.wick_vec(items)


# ---------------------------------------------------------------------------
# brute-force mode expansion

@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    certified: bool
    bounds: tuple


def _clearing_polynomial(weights):
    """D = prod_{i<j} (x_i - x_j)^(w_i + w_j) as {exponents: int}."""
    from math import comb

    n = len(weights)
    poly = {(0,) * n: 1}
    for i in range(n):
        for j in range(i + 1, n):
            d = weights[i] + weights[j]
            nxt: dict = {}
            for e, c in poly.items():
                for k in range(d + 1):
                    e2 = list(e)
                    e2[i] += d - k
                    e2[j] += k
                    e2 = tuple(e2)
                    nxt[e2] = nxt.get(e2, 0) + c * comb(d, k) * (-1) ** k
            poly = {e: c for e, c in nxt.items() if c}
    return poly


def _expansion(model, states, bounds, last_at_origin=False):
    """Laurent coefficients {exponents: Fraction} of the ordered correlator,
    restricted to intermediate weights K_i <= bounds[i].

    With ``last_at_origin`` the rightmost point is 0, so Y(v_n, 0)Omega = v_n
    and only the x_n^0 part of the expansion is produced.
    """
    n = len(states)
    wts = [model.vec_weight(s) for s in states]
    vac = model.vacuum()
    # layer: {(K, partial exponents): vector}
    layer = {(0, ()): {vac: Fraction(1)}}
    start = n - 1
    if last_at_origin and n > 1:
        layer = {(wts[-1], (0,)): dict(states[-1])}
        start = n - 2
    for i in range(start, -1, -1):
        cap = 0 if i == 0 else bounds[i - 1]
        nxt: dict = {}
        for (K, exps), vec in layer.items():
            comps = model.vertex_apply(states[i], vec, cap)
            for K2, out in comps.items():
                if i == 0 and K2 != 0:
                    continue
                e = K2 - K - wts[i]
                key = (K2, (e,) + exps)
                axpy(nxt.setdefault(key, {}), Fraction(1), out)
        layer = {k: v for k, v in nxt.items() if v}
    out = {}
    for (K, exps), vec in layer.items():
        c = vec.get(vac, Fraction(0))
        if c:
            out[exps] = out.get(exps, 0) + c
    return out


def oracle_polynomial(model, states, cutoff=None, last_at_origin=False):
    """Exact numerator P = D * correlator with D = prod (x_i - x_j)^(w_i + w_j).

    Returns (P, D, certified, bounds).  P is independent of the points, so one
    call serves every PointConfig; with ``last_at_origin`` only its x_n^0 part
    is built (enough when the last point is 0).
    """
    n = len(states)
    wts = [model.vec_weight(s) for s in states]
    if any(w is None for w in wts):
        return {}, {}, True, ()
    d = {(i, j): wts[i] + wts[j] for i in range(n) for j in range(i + 1, n)}
    bounds = []
    for i in range(n - 1):
        b = sum(d[(l, j)] for l in range(i + 1) for j in range(l + 1, n)) - sum(wts[: i + 1])
        bounds.append(max(b, 0))
    need = max(bounds, default=0)
    if cutoff is None:
        cutoff = need
    used = [min(b, cutoff) for b in bounds]
    D = _clearing_polynomial(wts)
    E = _expansion(model, states, used, last_at_origin)
    P: dict = {}
    for e1, c1 in E.items():
        for e2, c2 in D.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            if min(e) < 0:
                continue
            P[e] = P.get(e, 0) + c1 * c2
    P = {e: c for e, c in P.items() if c}
    return P, D, cutoff >= need, tuple(bounds)


def _evaluate(poly, xs):
    total = Fraction(0)
    for e, c in poly.items():
        term = Fraction(c)
        for x, k in zip(xs, e):
            if k:
                term *= x ** k
        total += term
    return total


def mode_oracle(model, insertions, cutoff=None) -> OracleResult:
    """Correlator from the mode expansion in the domain |x_1| > ... > |x_n|.

    When the translated points x_i - x_n are still radially ordered they are
    used instead (correlators depend only on differences), which removes the
    expansion of Y(v_n, x_n)Omega.
    """
    items = _as_items(insertions)
    xs = [x for _, x in items]
    for a, b in zip(xs, xs[1:]):
        if not abs(a) > abs(b):
            raise DomainError("mode expansion needs |x_1| > |x_2| > ...")
    shifted = [x - xs[-1] for x in xs] if xs else xs
    shift = all(abs(a) > abs(b) for a, b in zip(shifted, shifted[1:]))
    if shift:
        xs = shifted
    states = [v for v, _ in items]
    # split inhomogeneous vectors into weight components
    comps = []
    for v in states:
        by_w: dict = {}
        for s, c in v.items():
            by_w.setdefault(model.weight(s), {})[s] = c
        comps.append(list(by_w.values()) or [{}])
    total = Fraction(0)
    certified = True
    bounds = ()
    for combo in product(*comps):
        if any(not v for v in combo):
            continue
        P, D, cert, bounds = oracle_polynomial(model, list(combo), cutoff, last_at_origin=shift)
        certified &= cert
        if P:
            total += _evaluate(P, xs) / _evaluate(D, xs)
    return OracleResult(total, certified, bounds)


# ---------------------------------------------------------------------------

def two_point_value(model, u: dict, v: dict, w, z) -> Fraction:
    """(-1)^k (u, v) (w - z)^(-2k) for quasi-primary u, v of weight k."""
    k = model.vec_weight(u)
    return (-1) ** k * model.form_vec(u, v) * (Fraction(w) - Fraction(z)) ** (-2 * k)


def two_point_check(model, u: dict, v: dict, w, z) -> Fraction:
    """Assert the quasi-primary two-point rule; returns the correlator."""
    for x in (u, v):
        if x and model.virasoro(1, x):
            raise ShapeError("two_point_check needs quasi-primary vectors")
    val = wick_correlator(model, [(u, w), (v, z)])
    ku, kv = model.vec_weight(u), model.vec_weight(v)
    expected = two_point_value(model, u, v, w, z) if ku == kv else Fraction(0)
    if val != expected:
        raise InvariantError(f"two-point rule violated: {val} != {expected}")
    return val
