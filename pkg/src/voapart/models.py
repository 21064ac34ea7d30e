"""Concrete VOA models: Heisenberg M_r(1), lattice V_L, tensor products.

Every model exposes the same small surface used by the correlator, partition
and Casimir engines:

    basis(k)            monomial basis of V_k (hashable states)
    dual_pairs(k)       [(v, v_dual_state, coeff)] with v^i = coeff * v_dual_state
    form(u, v)          invariant bilinear form on monomials
    wick(items)         sphere correlator of monomials [(state, point), ...]
    vertex_components   all weight components of Y(a, z) v
    virasoro(m, vec)    L_m action

Lattice states are (FockState, charge) with the Heisenberg part written in a
rational orthogonal frame f_c of L (x) Q (G = L diag(D) L^T), so that
[h^c_m, h^d_n] = m D_c delta_cd delta_{m,-n}.  Tensor states are tuples of
factor states.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial

from . import fock
from .errors import PoleError, ShapeError, VoaError
from .lattice import (
    Cocycle,
    EvenLattice,
    enumerate_by_norm,
    heisenberg_frame,
    lattice_voa_graded_dims,
    load_lattice,
)
from .linalg import axpy
from .series import colored_partition_numbers

_ONE = Fraction(1)


def gbinom(top: int, k: int) -> Fraction:
    """Generalized binomial coefficient C(top, k) for integer top, k >= 0."""
    num = 1
    for i in range(k):
        num *= top - i
    return Fraction(num, factorial(k))


class Model:
    """Common helpers; subclasses fill in the model-specific pieces."""

    name = "model"
    central_charge: int = 0

    def graded_dims(self, N: int) -> list[int]:
        return [len(self.basis(k)) for k in range(N + 1)]

    def vacuum(self):
        raise NotImplementedError

    def weight(self, state):
        raise NotImplementedError

    def vec_weight(self, vec: dict):
        for s in vec:
            return self.weight(s)
        return None

    # vectors ---------------------------------------------------------------
    def form_vec(self, u: dict, v: dict) -> Fraction:
        total = Fraction(0)
        for s, a in u.items():
            for t, b in v.items():
                val = self.form(s, t)
                if val:
                    total += a * b * val
        return total

    def wick_vec(self, items) -> Fraction:
        """Correlator of vector insertions [(vec, point), ...] by multilinearity."""
        total = Fraction(0)
        expanded = [list(vec.items()) for vec, _ in items]
        points = [x for _, x in items]
        for combo in product(*expanded):
            coeff = _ONE
            for _, c in combo:
                coeff *= c
            val = self.wick([(s, x) for (s, _), x in zip(combo, points)])
            if val:
                total += coeff * val
        return total

    def vertex_apply(self, a: dict, v: dict, wmax: int) -> dict:
        """{W: component of weight W of Y(a, z) v} for W <= wmax (vectors a, v)."""
        out: dict = {}
        memo = self.__dict__.setdefault("_vc_memo", {})
        for s, ca in a.items():
            for t, cv in v.items():
                key = (s, t, wmax)
                comps = memo.get(key)
                if comps is None:
                    comps = memo[key] = self.vertex_components(s, t, wmax)
                for W, vec in comps.items():
                    axpy(out.setdefault(W, {}), ca * cv, vec)
        return {W: vec for W, vec in out.items() if vec}

    def mode(self, a: dict, n: int, v: dict) -> dict:
        """Physics-normalized mode a_n (lowers weight by n) applied to v."""
        wa, wv = self.vec_weight(a), self.vec_weight(v)
        if wa is None or wv is None:
            return {}
        W = wv - n
        if W < 0:
            return {}
        return self.vertex_apply(a, v, W).get(W, {})

    def l1_matrix(self, k: int):
        src, dst = self.basis(k), self.basis(k - 1)
        index = {s: i for i, s in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for j, s in enumerate(src):
            for t, c in self.virasoro(1, {s: _ONE}).items():
                mat[index[t]][j] = c
        return mat

    def qp_subspace(self, k: int) -> list[dict]:
        from .linalg import nullspace

        src = self.basis(k)
        if k == 0:
            return [{self.vacuum(): _ONE}]
        mat = self.l1_matrix(k)
        if not mat:
            return [{s: _ONE} for s in src]
        return [{s: c for s, c in zip(src, x) if c} for x in nullspace(mat, len(src))]

    def qp_dual_pairs(self, k: int) -> list[tuple[dict, dict]]:
        from .linalg import inverse

        qp = self.qp_subspace(k)
        if not qp:
            return []
        gram = [[self.form_vec(a, b) for b in qp] for a in qp]
        ginv = inverse(gram)
        pairs = []
        for i, a in enumerate(qp):
            dual: dict = {}
            for j, b in enumerate(qp):
                axpy(dual, ginv[j][i], b)
            pairs.append((a, dual))
        return pairs

    def automorphism(self, vec: dict) -> dict:
        """A lift of -1 on the Heisenberg generators (identity where not implemented)."""
        return dict(vec)

    def state_str(self, state) -> str:
        return str(state)


# ---------------------------------------------------------------------------

class FreeFieldModel(Model):
    """Heisenberg Fock space of rank r, optionally extended by lattice charges."""

    def __init__(self, rank: int, lattice: EvenLattice | None = None, name: str | None = None):
        self.rank = rank
        self.lattice = lattice
        self.central_charge = rank
        if lattice is not None:
            if lattice.rank != rank:
                raise ShapeError("lattice rank must equal Heisenberg rank")
            Lmat, D = heisenberg_frame(lattice)
            self.frame = Lmat
            self.metric = tuple(D)
            self.cocycle = Cocycle.standard(lattice)
            self.name = name or f"lattice:{lattice.name}"
        else:
            self.frame = None
            self.metric = None
            self.cocycle = None
            self.name = name or f"heisenberg:{rank}"
        self._basis: dict[int, tuple] = {}
        self._frame_cache: dict = {}

    def __repr__(self):
        return f"FreeFieldModel({self.name})"

    # state helpers -----------------------------------------------------------
    @property
    def charged(self) -> bool:
        return self.lattice is not None

    def split(self, state):
        if self.charged:
            return state
        return state, None

    def join(self, fk, charge):
        return (fk, charge) if self.charged else fk

    def vacuum(self):
        return self.join(fock.VACUUM, (0,) * self.rank if self.charged else None)

    def weight(self, state) -> int:
        fk, ch = self.split(state)
        w = fock.weight(fk)
        if ch is not None:
            w += self.lattice.norm(ch) // 2
        return w

    def fcoords(self, charge) -> tuple:
        """Frame coordinates of a lattice vector."""
        if charge is None:
            return None
        hit = self._frame_cache.get(charge)
        if hit is None:
            L = self.frame
            hit = tuple(sum(charge[j] * L[j][c] for j in range(self.rank) if charge[j]) for c in range(self.rank))
            self._frame_cache[charge] = hit
        return hit

    def momentum(self, charge):
        """Eigenvalues of h^c_0 on e^charge: <f_c, charge> = D_c charge^c."""
        if charge is None:
            return None
        af = self.fcoords(charge)
        return tuple(self.metric[c] * af[c] for c in range(self.rank))

    def inner(self, a, b) -> int:
        return self.lattice.inner(a, b)

    def state_str(self, state) -> str:
        fk, ch = self.split(state)
        s = fock.fock_str(fk)
        if ch is not None and any(ch):
            s = f"{s} e^{list(ch)}"
        return s

    # bases and forms -----------------------------------------------------------
    def basis(self, k: int) -> tuple:
        hit = self._basis.get(k)
        if hit is not None:
            return hit
        if k < 0:
            out = ()
        elif not self.charged:
            out = fock.basis(self.rank, k)
        else:
            out = []
            for nrm, vecs in enumerate_by_norm(self.lattice, 2 * k).items():
                fw = k - nrm // 2
                for fk in fock.basis(self.rank, fw):
                    for v in vecs:
                        out.append((fk, v))
            out = tuple(out)
        self._basis[k] = out
        return out

    def graded_dims(self, N: int) -> list[int]:
        if not self.charged:
            return colored_partition_numbers(self.rank, N)
        return lattice_voa_graded_dims(self.lattice, N)

    def kappa(self, charge) -> int:
        if not any(charge):
            return 1
        neg = tuple(-a for a in charge)
        return (-1) ** (self.lattice.norm(charge) // 2) * self.cocycle(charge, neg)

    def form(self, u, v) -> Fraction:
        fu, a = self.split(u)
        fv, b = self.split(v)
        if fu != fv:
            return Fraction(0)
        val = fock.bilinear_form(fu, fv, self.metric)
        if a is not None:
            if any(x + y for x, y in zip(a, b)):
                return Fraction(0)
            val *= self.kappa(a)
        return val

    def dual_state(self, s):
        fk, ch = self.split(s)
        if ch is None:
            return s
        return (fk, tuple(-x for x in ch))

    def dual_pairs(self, k: int) -> list[tuple]:
        out = []
        for s in self.basis(k):
            t = self.dual_state(s)
            g = self.form(s, t)
            if not g:
                raise VoaError("degenerate invariant form")
            out.append((s, t, 1 / g))
        return out

    def conformal_vector(self) -> dict:
        nu = fock.conformal_vector(self.rank, self.metric)
        return {self.join(fk, (0,) * self.rank if self.charged else None): c for fk, c in nu.items()}

    def automorphism(self, vec: dict) -> dict:
        out = {}
        for s, c in vec.items():
            fk, ch = self.split(s)
            sign = (-1) ** len(fk)
            if ch is None:
                out[s] = sign * c
            else:
                neg = tuple(-x for x in ch)
                # theta(e^a) = kappa-compatible lift of -1
                out[(fk, neg)] = out.get((fk, neg), 0) + sign * c * self._lift_sign(ch)
        return {s: c for s, c in out.items() if c}

    def _lift_sign(self, ch) -> int:
        # e^a -> (-1)^{<a,a>/2} e^{-a} is an automorphism for the standard cocycle
        # on the span of the weight-graded pieces we test (ledger: lift of -1).
        return (-1) ** (self.lattice.norm(ch) // 2)

    # Virasoro ---------------------------------------------------------------------
    def virasoro(self, m: int, vec: dict) -> dict:
        out: dict = {}
        for s, c in vec.items():
            fk, ch = self.split(s)
            res = fock.virasoro_mode(m, {fk: _ONE}, self.rank, self.metric, self.momentum(ch))
            for t, d in res.items():
                key = self.join(t, ch)
                val = out.get(key, 0) + c * d
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return out

    # Wick contractions ----------------------------------------------------------------
    def wick(self, items) -> Fraction:
        """Exact sphere correlator of monomial insertions [(state, point), ...]."""
        xs = [Fraction(x) for _, x in items]
        n = len(xs)
        for i in range(n):
            for j in range(i):
                if xs[i] == xs[j]:
                    raise PoleError("coincident insertion points")
        focks, charges = [], []
        for s, _ in items:
            fk, ch = self.split(s)
            focks.append(fk)
            charges.append(ch)
        pref = _ONE
        charged = self.charged and any(any(ch) for ch in charges)
        if self.charged:
            tot = [sum(ch[c] for ch in charges) for c in range(self.rank)]
            if any(tot):
                return Fraction(0)
            if charged:
                for i in range(n):
                    if not any(charges[i]):
                        continue
                    for j in range(i + 1, n):
                        if not any(charges[j]):
                            continue
                        ip = self.inner(charges[i], charges[j])
                        pref *= self.cocycle(charges[i], charges[j]) * (xs[i] - xs[j]) ** ip
        legs = [(i, c, nn - 1) for i, fk in enumerate(focks) for c, nn in fk]
        if not legs:
            return pref
        if not charged:
            if len(legs) % 2:
                return Fraction(0)
            counts: dict = {}
            for _, c, _ in legs:
                counts[c] = counts.get(c, 0) + 1
            if any(v % 2 for v in counts.values()):
                return Fraction(0)
        return pref * self._matchings(legs, xs, charges if charged else None)

    def _metric_c(self, c) -> Fraction:
        return _ONE if self.metric is None else self.metric[c - 1]

    def _matchings(self, legs, xs, charges) -> Fraction:
        L = len(legs)
        single = [Fraction(0)] * L
        if charges is not None:
            mom = [self.momentum(ch) if any(ch) else None for ch in charges]
            for l, (i, c, a) in enumerate(legs):
                s = Fraction(0)
                for j, m in enumerate(mom):
                    if j == i or m is None or not m[c - 1]:
                        continue
                    s += m[c - 1] / (xs[i] - xs[j]) ** (a + 1)
                single[l] = s * (-1) ** a
        pair = [[None] * L for _ in range(L)]
        for l in range(L):
            i, c, a = legs[l]
            for l2 in range(l + 1, L):
                j, d, b = legs[l2]
                if c != d or i == j:
                    continue
                coeff = Fraction(factorial(a + b + 1), factorial(a) * factorial(b))
                pair[l][l2] = self._metric_c(c) * (-1) ** a * coeff / (xs[i] - xs[j]) ** (a + b + 2)

        @lru_cache(maxsize=None)
        def f(mask: int) -> Fraction:
            if mask == 0:
                return _ONE
            l = (mask & -mask).bit_length() - 1
            rest = mask & ~(1 << l)
            total = Fraction(0)
            if single[l]:
                total += single[l] * f(rest)
            row = pair[l]
            m = rest
            while m:
                l2 = (m & -m).bit_length() - 1
                m &= m - 1
                p = row[l2]
                if p is not None:
                    sub = f(rest & ~(1 << l2))
                    if sub:
                        total += p * sub
            return total

        return f((1 << L) - 1)

    # vertex operators by modes ------------------------------------------------------------
    def _heis(self, c, n, vec, momentum):
        return fock.heis_mode_apply(c, n, vec, self.metric, momentum)

    def _alpha_mode(self, af, n, vec):
        """alpha_n = sum_c af_c h^c_n (n != 0) applied to a Fock vector."""
        out: dict = {}
        for c in range(1, self.rank + 1):
            if af[c - 1]:
                axpy(out, af[c - 1], self._heis(c, n, vec, None))
        return out

    def vertex_components(self, a, v, wmax: int) -> dict:
        """{W: weight-W part of Y(a, z) v} for monomials a, v and W <= wmax.

        Y(u (x) e^alpha, z) = :prod_i d^(n_i - 1) h^(c_i)(z) / (n_i - 1)!  Gamma_alpha(z):
        with Gamma_alpha = E^-(-alpha, z) E^+(-alpha, z) e_alpha z^alpha_0 and the
        annihilation parts (modes >= 0, including h_0) to the right of e_alpha.
        By homogeneity each weight component carries a single power of z.
        """
        fa, alpha = self.split(a)
        fv, beta = self.split(v)
        F_in = fock.weight(fv)
        if self.charged:
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            shift = self.lattice.norm(gamma) // 2
            mom_in = self.momentum(beta)
            has_alpha = any(alpha)
            af = self.fcoords(alpha)
        else:
            gamma, shift, mom_in, has_alpha, af = None, 0, None, False, None
        F_max = wmax - shift
        if F_max < 0:
            return {}

        # annihilation stage: each leg either annihilates now (mode m >= 0) or is deferred
        stage = {(): {fv: _ONE}}
        for idx, (c, nn) in enumerate(fa):
            nxt: dict = {}
            for deferred, vec in stage.items():
                axpy(nxt.setdefault(deferred + (idx,), {}), _ONE, vec)
                wt = max(fock.weight(s) for s in vec)
                for m in range(0, wt + 1):
                    coeff = gbinom(-m - 1, nn - 1)
                    res = self._heis(c, m, vec, mom_in)
                    if res:
                        axpy(nxt.setdefault(deferred, {}), coeff, res)
            stage = {k: v_ for k, v_ in nxt.items() if v_}
        if not stage:
            return {}

        if has_alpha:
            # E^+(-alpha, z): S_d with d S_d = -sum_{n>=1} alpha_n S_{d-n}
            for deferred in list(stage):
                vec = stage[deferred]
                wt = max(fock.weight(s) for s in vec)
                S = [vec]
                total = dict(vec)
                for d in range(1, wt + 1):
                    acc: dict = {}
                    for nn in range(1, d + 1):
                        axpy(acc, Fraction(-1, d), self._alpha_mode(af, nn, S[d - nn]))
                    S.append(acc)
                    axpy(total, _ONE, acc)
                stage[deferred] = total
            sign = self.cocycle(alpha, beta)
        else:
            sign = 1

        out: dict = {}
        for deferred, vec in stage.items():
            vec = {s: c_ for s, c_ in vec.items() if fock.weight(s) <= F_max}
            if not vec:
                continue
            if has_alpha:
                # E^-(-alpha, z): T_e with e T_e = sum_{n>=1} alpha_{-n} T_{e-n}
                wt0 = min(fock.weight(s) for s in vec)
                T = [vec]
                total = dict(vec)
                for e in range(1, F_max - wt0 + 1):
                    acc: dict = {}
                    for nn in range(1, e + 1):
                        axpy(acc, Fraction(1, e), self._alpha_mode(af, -nn, T[e - nn]))
                    acc = {s: c_ for s, c_ in acc.items() if fock.weight(s) <= F_max}
                    T.append(acc)
                    axpy(total, _ONE, acc)
                vec = total
            for idx in deferred:
                c, nn = fa[idx]
                acc = {}
                wt0 = min(fock.weight(s) for s in vec)
                for j in range(nn, F_max - wt0 + 1):
                    coeff = gbinom(j - 1, nn - 1)
                    res = self._heis(c, -j, vec, None)
                    res = {s: c_ for s, c_ in res.items() if fock.weight(s) <= F_max}
                    axpy(acc, coeff, res)
                vec = acc
                if not vec:
                    break
            for s, c_ in vec.items():
                key = self.join(s, gamma)
                W = fock.weight(s) + shift
                bucket = out.setdefault(W, {})
                val = bucket.get(key, 0) + sign * c_
                if val:
                    bucket[key] = val
                else:
                    bucket.pop(key, None)
        return {W: vec for W, vec in out.items() if vec}


class TensorModel(Model):
    """V_1 (x) ... (x) V_n with states as tuples of factor states."""

    def __init__(self, factors, name: str | None = None):
        self.factors = list(factors)
        self.central_charge = sum(f.central_charge for f in self.factors)
        self.name = name or "tensor:" + ",".join(f.name for f in self.factors)
        self._basis: dict[int, tuple] = {}

    def __repr__(self):
        return f"TensorModel({self.name})"

    def vacuum(self):
        return tuple(f.vacuum() for f in self.factors)

    def weight(self, state) -> int:
        return sum(f.weight(s) for f, s in zip(self.factors, state))

    def state_str(self, state) -> str:
        return " (x) ".join(f.state_str(s) for f, s in zip(self.factors, state))

    def _splits(self, k):
        n = len(self.factors)
        if n == 0:
            if k == 0:
                yield ()
            return
        from .series import compositions

        yield from compositions(k, n)

    def basis(self, k: int) -> tuple:
        hit = self._basis.get(k)
        if hit is not None:
            return hit
        out = []
        for ws in self._splits(k):
            out.extend(product(*[f.basis(w) for f, w in zip(self.factors, ws)]))
        out = tuple(out)
        self._basis[k] = out
        return out

    def graded_dims(self, N: int) -> list[int]:
        dims = [1] + [0] * N
        for f in self.factors:
            fd = f.graded_dims(N)
            dims = [sum(dims[i] * fd[n - i] for i in range(n + 1)) for n in range(N + 1)]
        return dims

    def form(self, u, v) -> Fraction:
        val = _ONE
        for f, a, b in zip(self.factors, u, v):
            val *= f.form(a, b)
            if not val:
                return val
        return val

    def dual_pairs(self, k: int) -> list[tuple]:
        out = []
        for ws in self._splits(k):
            for combo in product(*[f.dual_pairs(w) for f, w in zip(self.factors, ws)]):
                coeff = _ONE
                for _, _, c in combo:
                    coeff *= c
                out.append((tuple(p[0] for p in combo), tuple(p[1] for p in combo), coeff))
        return out

    def wick(self, items) -> Fraction:
        val = _ONE
        points = [x for _, x in items]
        for idx, f in enumerate(self.factors):
            val *= f.wick([(s[idx], x) for (s, _), x in zip(items, points)])
            if not val:
                return val
        return val

    def conformal_vector(self) -> dict:
        out: dict = {}
        vac = [f.vacuum() for f in self.factors]
        for idx, f in enumerate(self.factors):
            for s, c in f.conformal_vector().items():
                key = tuple(s if j == idx else vac[j] for j in range(len(vac)))
                out[key] = out.get(key, 0) + c
        return out

    def virasoro(self, m: int, vec: dict) -> dict:
        out: dict = {}
        for s, c in vec.items():
            for idx, f in enumerate(self.factors):
                for t, d in f.virasoro(m, {s[idx]: _ONE}).items():
                    key = s[:idx] + (t,) + s[idx + 1:]
                    axpy(out, c * d, {key: _ONE})
        return out

    def automorphism(self, vec: dict) -> dict:
        out: dict = {}
        for s, c in vec.items():
            terms = [(_ONE, ())]
            for f, x in zip(self.factors, s):
                img = f.automorphism({x: _ONE})
                terms = [(a * b, t + (y,)) for a, t in terms for y, b in img.items()]
            for a, t in terms:
                axpy(out, c * a, {t: _ONE})
        return out

    def vertex_components(self, a, v, wmax: int) -> dict:
        parts = [f.vertex_components(x, y, wmax) for f, x, y in zip(self.factors, a, v)]
        acc = {0: {(): _ONE}}
        for comp in parts:
            nxt: dict = {}
            for W0, vec0 in acc.items():
                for W1, vec1 in comp.items():
                    if W0 + W1 > wmax:
                        continue
                    bucket = nxt.setdefault(W0 + W1, {})
                    for s0, c0 in vec0.items():
                        for s1, c1 in vec1.items():
                            axpy(bucket, c0 * c1, {s0 + (s1,): _ONE})
            acc = {W: vec for W, vec in nxt.items() if vec}
        return acc


@dataclass
class GradedDimsModel(Model):
    """A model known only through stored graded dimensions (no correlators)."""

    name: str
    central_charge: int
    dims: list = field(default_factory=list)

    def graded_dims(self, N: int) -> list[int]:
        if N >= len(self.dims):
            raise ShapeError(f"{self.name}: graded dimensions stored only to weight {len(self.dims) - 1}")
        return list(self.dims[: N + 1])

    def basis(self, k):
        raise VoaError(f"{self.name} has no explicit basis; only graded dimensions are available")


# ---------------------------------------------------------------------------

def heisenberg(r: int = 1) -> FreeFieldModel:
    return FreeFieldModel(r)


def trivial() -> FreeFieldModel:
    return FreeFieldModel(0, name="trivial")


def lattice_model(L: EvenLattice | str) -> FreeFieldModel:
    if isinstance(L, str):
        L = load_lattice(L)
    return FreeFieldModel(L.rank, L)


def tensor(*factors) -> TensorModel:
    return TensorModel(factors)


def moonshine_graded_dims(N: int) -> list[int]:
    from .moonshine import j_coefficients

    c = j_coefficients(N)
    # V^natural: dims c_{n-1} for n >= 2, V_0 = 1, V_1 = 0
    return [1, 0] + [c[n - 1] for n in range(2, N + 1)] if N >= 1 else [1]


def parse_model(desc: str) -> Model:
    """heisenberg:r | lattice:NAME | tensor:DESC,DESC,... | trivial | moonshine."""
    desc = desc.strip()
    kind, _, rest = desc.partition(":")
    if kind == "heisenberg":
        try:
            r = int(rest or 1)
        except ValueError:
            raise ShapeError(f"bad Heisenberg rank in {desc!r}") from None
        if r < 0:
            raise ShapeError("rank must be non-negative")
        return heisenberg(r)
    if kind == "lattice":
        if not rest:
            raise ShapeError("lattice model needs a name")
        return lattice_model(rest)
    if kind == "tensor":
        parts = _split_tensor(rest)
        if not parts:
            raise ShapeError("empty tensor product")
        return TensorModel([parse_model(p) for p in parts])
    if kind == "trivial":
        return trivial()
    if kind == "moonshine":
        return GradedDimsModel("moonshine", 24, moonshine_graded_dims(12))
    raise ShapeError(f"unknown model descriptor {desc!r}")


def _split_tensor(text: str) -> list[str]:
    # tensor:lattice:E8,lattice:E8 ; nested tensors are not supported in the flat syntax
    return [p for p in (s.strip() for s in text.split(",")) if p]
