"""Genus-g partition functions as truncated series in the sewing parameters.

The coefficient of q_1^n_1 ... q_g^n_g is the vacuum expectation of a product
of Casimir bilocal fields gamma_n(w, z) = sum_i Y(v_i, w) Y(v^i, z), with v^i
the dual basis of V_n under the invariant bilinear form.
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

from .correlators import PointConfig
from .errors import BudgetError, ShapeError
from .models import Model, heisenberg, lattice_model, tensor
from .parallel import pmap
from .series import (
    QSeries,
    USeries,
    compositions,
    lagrange_invert_mu,
    qseries_equal_report,
    qseries_inv,
    qseries_mul,
    useries_compose,
)

DEFAULT_BUDGET = 10 ** 7


def default_budget() -> int:
    env = os.environ.get("VOAPART_BUDGET")
    if env:
        try:
            val = int(float(env))
        except ValueError:
            raise ShapeError(f"VOAPART_BUDGET must be a number, got {env!r}") from None
        if val <= 0:
            raise ShapeError("VOAPART_BUDGET must be positive")
        return val
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class Separating:
    """Variant Z_{V,g,i}: a node splitting genus i from genus g - i.

    ``w`` and ``z`` are the extra sewing points and ``k_trunc`` bounds the power
    of the extra variable q (the last variable of the series).
    """

    i: int
    w: Fraction
    z: Fraction
    k_trunc: int

    def __post_init__(self):
        object.__setattr__(self, "w", Fraction(self.w))
        object.__setattr__(self, "z", Fraction(self.z))
        if self.w == self.z:
            raise ShapeError("separating node needs w != z")
        if self.k_trunc < 0:
            raise ShapeError("k_trunc must be non-negative")


@dataclass(frozen=True)
class PartitionRequest:
    model: Model
    genus: int
    trunc: int
    points: PointConfig
    variant: Separating | None = None
    budget: int = field(default_factory=default_budget)
    workers: int = 1

    def __post_init__(self):
        if self.genus < 0 or self.trunc < 0:
            raise ShapeError("genus and truncation must be non-negative")
        if self.points.genus != self.genus:
            raise ShapeError(f"need {self.genus} point pairs, got {self.points.genus}")
        if self.budget <= 0:
            raise ShapeError("budget must be positive")
        if self.variant is not None:
            if not 1 <= self.variant.i <= self.genus // 2:
                raise ShapeError("separating variant needs 1 <= i <= floor(g/2)")
            if {self.variant.w, self.variant.z} & set(self.points.points):
                raise ShapeError("extra sewing points must differ from the handle points")


# ---------------------------------------------------------------------------

def _pairs_of(points):
    if isinstance(points, PointConfig):
        return points.pairs()
    return [(Fraction(w), Fraction(z)) for w, z in points]


def _dual_lists(model, weights):
    return [model.dual_pairs(n) for n in weights]


def casimir_pair_correlator(model: Model, weights, points) -> Fraction:
    """(Omega, gamma_{n_1}(w_1, z_1) ... gamma_{n_g}(w_g, z_g) Omega)."""
    pairs = _pairs_of(points)
    if len(pairs) != len(weights):
        raise ShapeError("one (w, z) pair per weight")
    if any(n < 0 for n in weights):
        raise ShapeError("weights must be non-negative")
    active = [(n, wz) for n, wz in zip(weights, pairs) if n > 0]
    if not active:
        return Fraction(1)
    lists = _dual_lists(model, [n for n, _ in active])
    if any(not l for l in lists):
        return Fraction(0)
    total = Fraction(0)
    wick = model.wick
    for combo in product(*lists):
        items = []
        coeff = Fraction(1)
        for (s, t, c), (_, (w, z)) in zip(combo, active):
            items.append((s, w))
            items.append((t, z))
            coeff *= c
        val = wick(items)
        if val:
            total += coeff * val
    return total


def _half_correlator(model, weights, pairs, extra, extra_point, extra_first: bool):
    """(Omega, gamma ... gamma Y(extra, p) Omega) or (Omega, Y(extra, p) gamma ... gamma Omega).

    ``extra`` is a monomial state.
    """
    active = [(n, wz) for n, wz in zip(weights, pairs) if n > 0]
    lists = _dual_lists(model, [n for n, _ in active])
    total = Fraction(0)
    for combo in product(*lists):
        items = []
        coeff = Fraction(1)
        for (s, t, c), (_, (w, z)) in zip(combo, active):
            items.append((s, w))
            items.append((t, z))
            coeff *= c
        items = ([(extra, extra_point)] + items) if extra_first else (items + [(extra, extra_point)])
        val = model.wick(items)
        if val:
            total += coeff * val
    return total


def estimate_terms(model: Model, genus: int, trunc: int, variant: Separating | None = None) -> int:
    """Number of Wick evaluations a partition_series call will perform."""
    dims = model.graded_dims(max(trunc, variant.k_trunc if variant else 0))
    total = 0
    for d in range(trunc + 1):
        for e in compositions(d, genus):
            base = prod(dims[n] if n else 1 for n in e)
            if variant is None:
                total += base
            else:
                total += base * sum(dims[k] for k in range(min(variant.k_trunc, trunc - d) + 1))
    return total


def _coeff_task(payload, e):
    model, pairs = payload
    return casimir_pair_correlator(model, e, pairs)


def _sep_task(payload, task):
    model, pairs, variant = payload
    e, k = task
    i = variant.i
    if k == 0:
        left = casimir_pair_correlator(model, e[:i], pairs[:i])
        right = casimir_pair_correlator(model, e[i:], pairs[i:])
        return left * right
    total = Fraction(0)
    for s, t, c in model.dual_pairs(k):
        left = _half_correlator(model, e[:i], pairs[:i], s, variant.w, extra_first=False)
        if not left:
            continue
        right = _half_correlator(model, e[i:], pairs[i:], t, variant.z, extra_first=True)
        total += c * left * right
    return total


def partition_series(req: PartitionRequest) -> QSeries:
    """Z_{V,g} (or Z_{V,g,i} for the separating variant) up to total degree ``trunc``."""
    model, g, N = req.model, req.genus, req.trunc
    est = estimate_terms(model, g, N, req.variant)
    if est > req.budget:
        raise BudgetError(f"{est} Wick evaluations exceed the budget {req.budget}")
    pairs = tuple(req.points.pairs())
    if req.variant is None:
        shape = QSeries.one(g, N)
        exps = shape.exponents()
        vals = pmap(_coeff_task, (model, pairs), exps, req.workers)
        return QSeries(g, N, dict(zip(exps, vals)))
    var = req.variant
    per_var = (N,) * g + (var.k_trunc,)
    shape = QSeries.one(g + 1, N, per_var)
    tasks = [(e[:-1], e[-1]) for e in shape.exponents()]
    vals = pmap(_sep_task, (model, pairs, var), tasks, req.workers)
    return QSeries(g + 1, N, {e + (k,): v for (e, k), v in zip(tasks, vals)}, per_var)


def as_point_config(points) -> PointConfig:
    """PointConfig from a PointConfig, a flat tuple, or a list of (w, z) pairs."""
    if isinstance(points, PointConfig):
        return points
    flat = []
    for p in points:
        flat.extend(p if isinstance(p, (tuple, list)) else [p])
    return PointConfig(tuple(flat))


def plain_series(model, genus, trunc, points, **kw) -> QSeries:
    points = as_point_config(points)
    return partition_series(PartitionRequest(model, genus, trunc, points, **kw))


# ---------------------------------------------------------------------------
# oracles and normalizations

def genus1_oracle(model: Model, N: int, points) -> QSeries:
    """Tr_V mu^{L_0} with mu = mu(t), t = q / (w - z)^2, re-expanded in q."""
    (w, z), = _pairs_of(points)
    dims = model.graded_dims(N)
    if N == 0:
        return QSeries.one(1, 0)
    char = USeries.from_list(dims, N)
    series = useries_compose(char, lagrange_invert_mu(N))
    return series.to_qseries(1 / (w - z) ** 2)


def theta_pullback(L, N: int, points) -> QSeries:
    """Theta_{L,1}(mu(t)) re-expanded in q; the genus-one normalized partition function of V_L."""
    from .lattice import theta_genus1

    (w, z), = _pairs_of(points)
    if N == 0:
        return QSeries.one(1, 0)
    series = useries_compose(theta_genus1(L, N), lagrange_invert_mu(N))
    return series.to_qseries(1 / (w - z) ** 2)


def normalized_partition(model: Model, g: int, N: int, points, workers: int = 1, budget=None) -> QSeries:
    """Z_{V,g} * Z_{M(1),g}^(-c)."""
    kw = {"workers": workers}
    if budget is not None:
        kw["budget"] = budget
    z = plain_series(model, g, N, points, **kw)
    c = model.central_charge
    zm = plain_series(heisenberg(1), g, N, points, **kw)
    inv = qseries_inv(zm)
    out = z
    for _ in range(c):
        out = qseries_mul(out, inv)
    return out


def tensor_partition_check(a: Model, b: Model, g: int, N: int, points, workers: int = 1) -> bool:
    """Z_{A (x) B} through the tensor basis equals Z_A * Z_B."""
    zt = plain_series(tensor(a, b), g, N, points, workers=workers)
    za = plain_series(a, g, N, points, workers=workers)
    zb = plain_series(b, g, N, points, workers=workers)
    return zt == qseries_mul(za, zb)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    exponent: tuple | None = None
    a_value: Fraction | None = None
    b_value: Fraction | None = None
    method: str = "casimir"

    def __str__(self):
        if self.equal:
            return "equal"
        return f"differ at {self.exponent}: {self.a_value} vs {self.b_value}"


def compare_partitions(a: Model, b: Model, g: int, N: int, points, workers: int = 1,
                       method: str = "auto", budget=None) -> Comparison:
    """First exponent (graded lex order) where Z_{A,g} and Z_{B,g} differ.

    ``method``: "casimir" always sums correlators; "oracle" (genus 1 only) uses
    Tr mu^{L_0}; "auto" uses the Casimir engine when it fits the budget and
    falls back to the genus-one oracle otherwise.
    """
    if a.central_charge != b.central_charge:
        warnings.warn(f"comparing central charges {a.central_charge} and {b.central_charge}")
    budget = budget or default_budget()
    if method not in ("auto", "casimir", "oracle"):
        raise ShapeError(f"unknown comparison method {method!r}")
    use_oracle = method == "oracle"
    if method == "auto" and g == 1:
        use_oracle = max(estimate_terms(a, g, N), estimate_terms(b, g, N)) > budget
    if use_oracle:
        if g != 1:
            raise ShapeError("the trace oracle exists only at genus one")
        za, zb = genus1_oracle(a, N, points), genus1_oracle(b, N, points)
        used = "oracle"
    else:
        za = plain_series(a, g, N, points, workers=workers, budget=budget)
        zb = plain_series(b, g, N, points, workers=workers, budget=budget)
        used = "casimir"
    diff = qseries_equal_report(za, zb)
    if diff is None:
        return Comparison(True, method=used)
    e, x, y = diff
    return Comparison(False, e, x, y, used)


def embed(series: QSeries, positions, num_vars: int, per_var=None) -> QSeries:
    """Re-index a series so that its variables sit at ``positions`` among ``num_vars``."""
    terms = {}
    for e, c in series.terms.items():
        full = [0] * num_vars
        for p, x in zip(positions, e):
            full[p] = x
        terms[tuple(full)] = c
    return QSeries(num_vars, series.trunc, terms, per_var)


def restrict_constant(series: QSeries, var: int) -> QSeries:
    """The part of ``series`` with exponent 0 in ``var``, as a series in the other variables."""
    terms = {e[:var] + e[var + 1:]: c for e, c in series.terms.items() if e[var] == 0}
    per = None if series.per_var is None else series.per_var[:var] + series.per_var[var + 1:]
    if per is not None and all(p >= series.trunc for p in per):
        per = None
    return QSeries(series.num_vars - 1, series.trunc, terms, per)
