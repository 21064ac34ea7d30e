"""Casimir elements, Casimir endomorphisms and the subalgebra PV they generate.

Conventions.  Modes are physics-normalized: a_n lowers the weight by n, so
C_k(m, n) = sum_i (v_i)_m (v^i)_n shifts the weight by -(m + n).  The Casimir
element C_{k,j} is the weight k - j component of sum_i Y(v_i, z) v^i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import BudgetError, InvariantError, ShapeError
from .linalg import Echelon, axpy, nullspace, solve

_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Casimir elements

@dataclass(frozen=True)
class CasimirElement:
    k: int
    j: int
    vector: dict

    @property
    def weight(self) -> int:
        return self.k - self.j


def casimir_element(model, k: int, j: int) -> CasimirElement:
    """C_{k,j} = sum_i (weight k-j component of Y(v_i, z) v^i)."""
    if k < 0:
        raise ShapeError("k must be non-negative")
    W = k - j
    if W < 0:
        return CasimirElement(k, j, {})
    out: dict = {}
    for s, t, c in model.dual_pairs(k):
        comp = model.vertex_components(s, t, W).get(W)
        if comp:
            axpy(out, c, comp)
    return CasimirElement(k, j, {s: c for s, c in out.items() if c})


def casimir_endo(model, k: int, m: int, n: int, x: dict) -> dict:
    """C_k(m, n) x = sum_i (v_i)_m (v^i)_n x."""
    out: dict = {}
    for s, t, c in model.dual_pairs(k):
        y = model.mode({t: _ONE}, n, x)
        if not y:
            continue
        z = model.mode({s: _ONE}, m, y)
        axpy(out, c, z)
    return {s: c for s, c in out.items() if c}


def casimir_endo_vacuum(model, ops) -> Fraction:
    """(Omega | C_{k_1}(m_1, n_1) ... C_{k_s}(m_s, n_s) Omega); the rightmost acts first."""
    vac = model.vacuum()
    x = {vac: _ONE}
    for k, m, n in reversed(list(ops)):
        x = casimir_endo(model, k, m, n, x)
        if not x:
            return Fraction(0)
    return x.get(vac, Fraction(0))


# ---------------------------------------------------------------------------
# gamma_k versus L_{-1} descendants of quasi-primaries

def descendant_norm_sq(j: int, m: int) -> Fraction:
    """(L_{-1}^m u, L_{-1}^m u^) for quasi-primary u of weight j >= 1 with (u, u^) = 1."""
    if j < 1:
        raise ShapeError("weight must be positive")
    return Fraction(factorial(m) * factorial(2 * j + m - 1), factorial(2 * j - 1))


def printed_coefficient(k: int, j: int) -> Fraction | None:
    """Closed-form candidate (2j-1)! / ((k-j)! (k+j-1)); None where it is undefined."""
    if k == 0 and j == 0:
        return _ONE
    if j < 1 or j > k:
        return None
    return Fraction(factorial(2 * j - 1), factorial(k - j) * (k + j - 1))


def true_coefficient(k: int, j: int) -> Fraction:
    """(2j-1)! / ((k-j)! (k+j-1)!), inverse of descendant_norm_sq(j, k-j)."""
    if k == 0 and j == 0:
        return _ONE
    return 1 / descendant_norm_sq(j, k - j)


def _l_minus_one_power(model, vec: dict, m: int) -> dict:
    for _ in range(m):
        vec = model.virasoro(-1, vec)
    return vec


def _tensor_terms(model, k: int):
    """Id_k and T_j = sum_u L_{-1}^{k-j} u (x) L_{-1}^{k-j} u^ as sparse tensors."""
    ident = {(s, t): c for s, t, c in model.dual_pairs(k)}
    terms = {}
    for j in range(k + 1):
        if j == 0 and k > 0:
            continue  # L_{-1} Omega = 0
        T: dict = {}
        for u, ud in model.qp_dual_pairs(j):
            a = _l_minus_one_power(model, u, k - j)
            b = _l_minus_one_power(model, ud, k - j)
            for s, x in a.items():
                for t, y in b.items():
                    T[(s, t)] = T.get((s, t), 0) + x * y
        T = {key: c for key, c in T.items() if c}
        if T:
            terms[j] = T
    return ident, terms


def _mixed_derivative(p: int, m: int) -> Fraction:
    """(d_w d_z)^m (w - z)^(-p) = coefficient * (w - z)^(-p - 2m)."""
    coeff = _ONE
    for i in range(m):
        q = p + 2 * i
        coeff *= -q * (q + 1)
    return coeff


@dataclass
class RelationReport:
    k: int
    printed: dict
    solved: dict
    printed_matches: bool
    solved_exact: bool
    lhs: Fraction
    rhs_printed: Fraction | None
    rhs_solved: Fraction
    four_point_exact: bool | None = None

    def summary(self) -> str:
        flag = "match" if self.printed_matches else "MISMATCH"
        fmt = lambda d: "{" + ", ".join(f"{j}: {c}" for j, c in d.items()) + "}"
        return (f"k={self.k}: printed {fmt(self.printed)} {flag}; solved {fmt(self.solved)}; "
                f"two-point identity exact={self.solved_exact}")


def _rhs(model, k, coeffs, w, z) -> Fraction:
    # <gamma_j^qp(w, z)> = (-1)^j dim QP_j (w - z)^(-2j) by the two-point rule
    total = Fraction(0)
    d = Fraction(w) - Fraction(z)
    for j, c in coeffs.items():
        if c is None:
            continue
        base = (-1) ** j * len(model.qp_subspace(j))
        total += c * base * _mixed_derivative(2 * j, k - j) * d ** (-2 * k)
    return total


def gamma_qp_relation_check(model, k: int, points=((3, 1),), extra=None) -> RelationReport:
    """Test gamma_k = sum_j c_{k,j} (d_w d_z)^{k-j} gamma_j^qp for the closed-form and solved c.

    The coefficients are solved from the operator identity
    Id_k = sum_j c_j sum_u L_{-1}^{k-j} u (x) L_{-1}^{k-j} u^ in V_k (x) V_k; both
    sets are then compared on vacuum two-point data at each (w, z) in ``points``.
    With ``extra = (a, x, b, y)`` a four-point check
    <gamma_k(w, z) Y(a, x) Y(b, y)> is also performed with the solved coefficients.
    """
    from .partition import casimir_pair_correlator

    if not 0 <= k <= 3:
        raise ShapeError("relation check implemented for 0 <= k <= 3")
    ident, terms = _tensor_terms(model, k)
    js = sorted(terms)
    keys = sorted(set(ident) | {key for T in terms.values() for key in T}, key=repr)
    mat = [[terms[j].get(key, 0) for j in js] for key in keys]
    sol = solve(mat, [ident.get(key, 0) for key in keys]) if js else []
    if sol is None:
        raise InvariantError(f"no coefficients reproduce Id_{k}")
    solved = dict(zip(js, sol))
    printed = {j: printed_coefficient(k, j) for j in js}
    printed_matches = all(printed[j] == solved[j] for j in js)
    solved_exact = True
    lhs = rhs_p = rhs_s = Fraction(0)
    for w, z in points:
        lhs = casimir_pair_correlator(model, [k], [(Fraction(w), Fraction(z))])
        rhs_s = _rhs(model, k, solved, w, z)
        rhs_p = None if any(v is None for v in printed.values()) else _rhs(model, k, printed, w, z)
        solved_exact &= lhs == rhs_s
        if rhs_p is not None and rhs_p != lhs:
            printed_matches = False
    four = None
    if extra is not None:
        a, x, b, y = extra
        (w, z), = points[:1]
        left = Fraction(0)
        for s, t, c in model.dual_pairs(k):
            left += c * model.wick_vec([({s: _ONE}, w), ({t: _ONE}, z), (a, x), (b, y)])
        right = Fraction(0)
        for j, c in solved.items():
            for u, ud in model.qp_dual_pairs(j):
                uu = _l_minus_one_power(model, u, k - j)
                vv = _l_minus_one_power(model, ud, k - j)
                right += c * model.wick_vec([(uu, w), (vv, z), (a, x), (b, y)])
        four = left == right
    return RelationReport(k, printed, solved, printed_matches, solved_exact, lhs, rhs_p, rhs_s, four)


# ---------------------------------------------------------------------------
# PV filtration

@dataclass
class PVFiltration:
    cutoff: int
    bases: dict                  # weight -> list of vectors spanning PV_k
    dims_v: list
    window: int
    kmax: int
    stable: bool = False
    generators: int = 0
    _ech: dict = field(default_factory=dict, repr=False)

    @property
    def dims(self) -> list[int]:
        return [len(self.bases.get(k, [])) for k in range(self.cutoff + 1)]

    def contains(self, vec: dict, k: int) -> bool:
        return self._ech[k].contains(vec)

    def table(self) -> list[dict]:
        return [{"weight": k, "dim_PV": d, "dim_V": self.dims_v[k]} for k, d in enumerate(self.dims)]


def _apply_all(model, k, x, wx, W, window):
    """Every C_k(m, n) x with intermediate weight I <= W + window and final
    weight F <= W, keyed by (I, F); x has weight wx, so n = wx - I, m = I - F."""
    out: dict = {}
    top = W + window
    for s, t, c in model.dual_pairs(k):
        mids = model.vertex_apply({t: _ONE}, x, top)
        for I, y in mids.items():
            for F, z in model.vertex_apply({s: _ONE}, y, W).items():
                axpy(out.setdefault((I, F), {}), c, z)
    return {key: v for key, v in out.items() if v}


def pv_filtration(model, W: int, window: int = 2, kmax: int | None = None,
                  budget: int = 10 ** 6, confirm: bool = True) -> PVFiltration:
    """Span of C_{k_1}(m_1, n_1) ... C_{k_s}(m_s, n_s) Omega in weights <= W.

    Each C_k(m, n) uses k <= kmax (default W) and intermediate weights
    <= W + window.  Closure runs until no graded piece grows; one extra pass
    confirms it (``stable``).
    """
    if W < 0 or window < 0:
        raise ShapeError("cutoff and window must be non-negative")
    kmax = W if kmax is None else kmax
    dims_v = model.graded_dims(W + window)
    cost = sum(dims_v[k] for k in range(1, kmax + 1)) * sum(dims_v[: W + 1])
    if cost > budget:
        raise BudgetError(f"PV closure needs about {cost} generator applications (budget {budget})")
    ech = {k: Echelon(order=repr) for k in range(W + 1)}
    vac = {model.vacuum(): _ONE}
    ech[0].add(vac)
    queue = [(0, vac)]
    gens = 0
    while queue:
        wx, x = queue.pop(0)
        for k in range(1, kmax + 1):
            for (_, F), z in _apply_all(model, k, x, wx, W, window).items():
                gens += 1
                if ech[F].add(z):
                    queue.append((F, z))
    pv = PVFiltration(W, {k: e.basis() for k, e in ech.items()}, dims_v[: W + 1], window, kmax,
                      generators=gens, _ech=ech)
    if not confirm:
        return pv
    # confirm: one more pass over the final bases adds nothing
    pv.stable = not any(
        not ech[F].contains(z)
        for wx in range(W + 1) for x in pv.bases[wx]
        for k in range(1, kmax + 1)
        for (_, F), z in _apply_all(model, k, x, wx, W, window).items()
    )
    return pv


def pv_automorphism_invariant(model, pv: PVFiltration) -> bool:
    return all(pv.contains(model.automorphism(v), k) for k, basis in pv.bases.items() for v in basis)


# ---------------------------------------------------------------------------
# trace orthogonality

def zero_mode_trace(model, a: dict, k: int) -> Fraction:
    """Tr_{V_k} a_0."""
    total = Fraction(0)
    for s in model.basis(k):
        total += model.mode(a, 0, {s: _ONE}).get(s, 0)
    return total


def orthogonal_complement(model, pv: PVFiltration, d: int) -> list[dict]:
    """Basis of {a in V_d : (a, p) = 0 for all p in PV_d}."""
    basis = model.basis(d)
    rows = [[model.form_vec(p, {s: _ONE}) for s in basis] for p in pv.bases[d]]
    if not rows:
        return [{s: _ONE} for s in basis]
    return [{s: c for s, c in zip(basis, x) if c} for x in nullspace(rows, len(basis))]


@dataclass
class TraceReport:
    d: int
    k: int
    complement_dim: int
    traces: dict                 # (index, weight) -> trace
    ok: bool
    control: dict                # weight -> Tr_{V_k} nu_0 (nonzero when the test discriminates)

    def summary(self) -> str:
        return f"d={self.d}, k<={self.k}: {self.complement_dim} complement vectors, all traces zero={self.ok}"


def trace_orthogonality_check(model, d: int, k: int, pv: PVFiltration | None = None) -> TraceReport:
    """Tr_{V_l} a_0 for a in PV_d^perp and l <= k; all must vanish exactly."""
    if pv is None or pv.cutoff < d:
        pv = pv_filtration(model, d)
    comp = orthogonal_complement(model, pv, d)
    traces = {(i, l): zero_mode_trace(model, a, l) for i, a in enumerate(comp) for l in range(k + 1)}
    nu = model.conformal_vector()
    control = {l: zero_mode_trace(model, nu, l) for l in range(k + 1)}
    return TraceReport(d, k, len(comp), traces, not any(traces.values()), control)
