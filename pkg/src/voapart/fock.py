"""Rank-r Heisenberg Fock space M_r(1): monomial bases, forms, Heisenberg and Virasoro modes.

A Fock monomial h^(c1)_{-n1} ... h^(ck)_{-nk} Omega is stored as a sorted tuple
of (color, mode) pairs with colors 1..r and modes n >= 1.  The empty tuple is
the vacuum.  Vectors are dicts {FockState: Fraction}.

Every function accepts an optional diagonal ``metric`` (D_1..D_r) so that
[h^(c)_m, h^(d)_n] = m D_c delta_{cd} delta_{m,-n}; the default is the
orthonormal Heisenberg algebra.  A ``momentum`` tuple gives the eigenvalues
of the zero modes h^(c)_0 (zero on the neutral Fock space).

PCT convention: theta h = -h, which with h_n^dagger = h_{-n} gives
(u, v) = (-1)^(#modes u) <u|v> for the invariant bilinear form.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .linalg import axpy, nullspace

FockState = tuple
VACUUM: FockState = ()

_ONE = Fraction(1)


def _metric(metric, c) -> Fraction:
    return _ONE if metric is None else metric[c - 1]


def _key(pair):
    return (pair[0], -pair[1])


def canonical(pairs) -> FockState:
    return tuple(sorted(pairs, key=_key))


def weight(state: FockState) -> int:
    return sum(n for _, n in state)


def fock_str(state: FockState) -> str:
    if not state:
        return "1"
    return " ".join(f"h[{c},-{n}]" for c, n in state)


_TOKEN = re.compile(r"h\[\s*(\d+)\s*,\s*-(\d+)\s*\]")


def parse_fock(text: str) -> FockState:
    text = text.strip()
    if text in ("", "1", "Omega", "vac"):
        return VACUUM
    pairs = [(int(c), int(n)) for c, n in _TOKEN.findall(text)]
    if not pairs or "".join(_TOKEN.sub("", text).split()):
        raise ValueError(f"cannot parse Fock monomial {text!r}")
    return canonical(pairs)


@lru_cache(maxsize=None)
def basis(r: int, k: int) -> tuple:
    """All monomials of weight k in rank r (r-colored partitions of k)."""
    if k < 0:
        return ()
    parts = [(c, n) for c in range(1, r + 1) for n in range(k, 0, -1)]
    parts.sort(key=_key)
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(parts)):
            c, n = parts[i]
            if n <= remaining:
                acc.append((c, n))
                rec(i, remaining - n, acc)
                acc.pop()

    rec(0, k, [])
    return tuple(sorted(out))


def multiplicities(state: FockState) -> dict:
    out: dict = {}
    for p in state:
        out[p] = out.get(p, 0) + 1
    return out


def norm_sq(state: FockState, metric=None) -> Fraction:
    """<u|u> = prod over distinct (c, n) of (n D_c)^m m!."""
    val = _ONE
    for (c, n), m in multiplicities(state).items():
        val *= (n * _metric(metric, c)) ** m * factorial(m)
    return val


def scalar_product(u: FockState, v: FockState, metric=None) -> Fraction:
    if u != v:
        return Fraction(0)
    return norm_sq(u, metric)


def bilinear_form(u: FockState, v: FockState, metric=None) -> Fraction:
    if u != v:
        return Fraction(0)
    return (-1) ** len(u) * norm_sq(u, metric)


def dual_basis(r: int, k: int, metric=None) -> list[dict]:
    """v^i = v_i / (v_i, v_i) so that (v_i, v^j) = delta_ij."""
    out = []
    for v in basis(r, k):
        g = bilinear_form(v, v, metric)
        assert g != 0, "degenerate invariant form"
        out.append({v: 1 / g})
    return out


def gram_diagonal(r: int, k: int, metric=None) -> list[Fraction]:
    return [bilinear_form(v, v, metric) for v in basis(r, k)]


def _insert(state: FockState, pair) -> FockState:
    key = _key(pair)
    for i, p in enumerate(state):
        if _key(p) >= key:
            return state[:i] + (pair,) + state[i:]
    return state + (pair,)


def heis_mode_state(c: int, n: int, state: FockState, metric=None, momentum=None) -> dict:
    """h^(c)_n applied to one monomial."""
    if n < 0:
        return {_insert(state, (c, -n)): _ONE}
    if n == 0:
        p = Fraction(0) if momentum is None else momentum[c - 1]
        return {state: p} if p else {}
    count = 0
    idx = None
    for i, pair in enumerate(state):
        if pair == (c, n):
            count += 1
            idx = i
    if not count:
        return {}
    return {state[:idx] + state[idx + 1:]: count * n * _metric(metric, c)}


def heis_mode_apply(c: int, n: int, vec: dict, metric=None, momentum=None) -> dict:
    out: dict = {}
    for s, coeff in vec.items():
        axpy(out, coeff, heis_mode_state(c, n, s, metric, momentum))
    return out


def vec_weight(vec: dict) -> int | None:
    for s in vec:
        return weight(s)
    return None


def virasoro_mode(m: int, vec: dict, rank: int, metric=None, momentum=None) -> dict:
    """L_m = 1/2 sum_c D_c^{-1} sum_j :h^(c)_j h^(c)_{m-j}: with annihilators on the right."""
    if not vec:
        return {}
    wt = max(weight(s) for s in vec)
    out: dict = {}
    half = Fraction(1, 2)
    for c in range(1, rank + 1):
        inv = 1 / _metric(metric, c)
        if m < 0:
            # both creation operators: ordered pairs (j, m - j) with j, m - j < 0
            for j in range(m + 1, 0):
                tmp = heis_mode_apply(c, m - j, vec, metric, momentum)
                axpy(out, half * inv, heis_mode_apply(c, j, tmp, metric, momentum))
        # one creator j < 0 and annihilator k = m - j >= 0 (both orders of the pair)
        for j in range(min(-1, m), m - wt - 1, -1):
            k = m - j
            if k > wt:
                continue
            tmp = heis_mode_apply(c, k, vec, metric, momentum)
            if tmp:
                axpy(out, inv, heis_mode_apply(c, j, tmp, metric, momentum))
        if m >= 0:
            for j in range(0, m + 1):
                tmp = heis_mode_apply(c, m - j, vec, metric, momentum)
                if tmp:
                    axpy(out, half * inv, heis_mode_apply(c, j, tmp, metric, momentum))
    return out


def conformal_vector(r: int, metric=None) -> dict:
    """nu = 1/2 sum_c D_c^{-1} h^(c)_{-1} h^(c)_{-1} Omega."""
    return {((c, 1), (c, 1)): Fraction(1, 2) / _metric(metric, c) for c in range(1, r + 1)}


def l1_matrix(r: int, k: int, metric=None) -> list[list[Fraction]]:
    """Matrix of L_1 : V_k -> V_{k-1} in the monomial bases."""
    src = basis(r, k)
    dst = basis(r, k - 1)
    index = {s: i for i, s in enumerate(dst)}
    mat = [[Fraction(0)] * len(src) for _ in dst]
    for j, s in enumerate(src):
        for t, c in virasoro_mode(1, {s: _ONE}, r, metric).items():
            mat[index[t]][j] = c
    return mat


def qp_subspace(r: int, k: int, metric=None) -> list[dict]:
    """Basis of the quasi-primary subspace ker(L_1) of V_k."""
    src = basis(r, k)
    if k == 0:
        return [{VACUUM: _ONE}]
    mat = l1_matrix(r, k, metric)
    if not mat:
        return [{s: _ONE} for s in src]
    out = []
    for x in nullspace(mat, len(src)):
        out.append({s: c for s, c in zip(src, x) if c})
    return out


def bilinear_vec(u: dict, v: dict, metric=None) -> Fraction:
    total = Fraction(0)
    for s, a in u.items():
        b = v.get(s)
        if b:
            total += a * b * bilinear_form(s, s, metric)
    return total


def qp_dual_pairs(r: int, k: int, metric=None) -> list[tuple[dict, dict]]:
    """Quasi-primary basis paired with its dual under the restricted bilinear form."""
    from .linalg import inverse

    qp = qp_subspace(r, k, metric)
    if not qp:
        return []
    gram = [[bilinear_vec(a, b, metric) for b in qp] for a in qp]
    ginv = inverse(gram)
    pairs = []
    for i, a in enumerate(qp):
        dual: dict = {}
        for j, b in enumerate(qp):
            axpy(dual, ginv[j][i], b)
        pairs.append((a, dual))
    return pairs
