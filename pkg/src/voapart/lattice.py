"""Even positive-definite lattices: short vectors, theta series, lattice-VOA gradings.

Norms are <x, x> = x^T G x with G the (integral, even-diagonal) Gram matrix;
the genus-one theta series counts vectors of norm 2m at q^m.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from . import _enum
from .errors import BudgetError, LatticeError
from .fock import basis as fock_basis
from .fock import bilinear_form as fock_bilinear
from .series import USeries, colored_partition_numbers


# ---------------------------------------------------------------------------
# exact helpers

def leading_minors(G) -> list[Fraction]:
    from .linalg import determinant

    return [determinant([row[:k] for row in G[:k]]) for k in range(1, len(G) + 1)]


def ldl(G) -> tuple[list[list[Fraction]], list[Fraction]]:
    """G = L diag(D) L^T with L unit lower triangular, exact."""
    n = len(G)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = Fraction(G[j][j]) - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise LatticeError("Gram matrix is not positive definite")
        for i in range(j + 1, n):
            L[i][j] = (Fraction(G[i][j]) - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def lll_reduce(G, delta=Fraction(3, 4)):
    """LLL reduction of a positive-definite Gram matrix.

    Returns (H, G') with H unimodular (rows are the new basis in old
    coordinates) and G' = H G H^T.
    """
    n = len(G)
    G = [[int(x) for x in row] for row in G]
    H = [[int(i == j) for j in range(n)] for i in range(n)]

    # work with Fractions for the Gram-Schmidt data, recomputed up to index k
    def gso(upto):
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(upto + 1):
            for j in range(i):
                s = Fraction(G[i][j])
                for t in range(j):
                    s -= mu[j][t] * mu[i][t] * B[t]
                mu[i][j] = s / B[j]
            s = Fraction(G[i][i])
            for t in range(i):
                s -= mu[i][t] ** 2 * B[t]
            B[i] = s
        return mu, B

    def sub(k, l, qq):
        # b_k <- b_k - qq b_l with exact Gram update
        gkk = G[k][k] - 2 * qq * G[k][l] + qq * qq * G[l][l]
        for i in range(n):
            if i != k:
                G[k][i] = G[k][i] - qq * G[l][i]
                G[i][k] = G[k][i]
        G[k][k] = gkk
        H[k] = [a - qq * b for a, b in zip(H[k], H[l])]

    k = 1
    while k < n:
        mu, B = gso(k)
        for l in range(k - 1, -1, -1):
            m = mu[k][l]
            if abs(m) > Fraction(1, 2):
                qq = math.floor(m + Fraction(1, 2))
                sub(k, l, qq)
                for t in range(l):
                    mu[k][t] -= qq * mu[l][t]
                mu[k][l] -= qq
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            H[k], H[k - 1] = H[k - 1], H[k]
            k = max(k - 1, 1)
    return H, G


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvenLattice:
    name: str
    gram: tuple

    def __post_init__(self):
        G = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", G)
        n = len(G)
        if any(len(row) != n for row in G):
            raise LatticeError("Gram matrix must be square")
        for i in range(n):
            if G[i][i] % 2:
                raise LatticeError(f"odd diagonal entry G[{i}][{i}] = {G[i][i]}")
            for j in range(i):
                if G[i][j] != G[j][i]:
                    raise LatticeError("Gram matrix must be symmetric")
        if n and any(m <= 0 for m in leading_minors(G)):
            raise LatticeError("Gram matrix is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, x, y) -> int:
        G = self.gram
        return sum(x[i] * G[i][j] * y[j] for i in range(len(x)) for j in range(len(y)) if x[i] and y[j])

    def norm(self, x) -> int:
        return self.inner(x, x)

    @cached_property
    def determinant(self) -> int:
        from .linalg import determinant

        return int(determinant(self.gram)) if self.rank else 1

    @cached_property
    def _reduced(self):
        if self.rank == 0:
            return [], []
        return lll_reduce(self.gram)

    @cached_property
    def _qform(self):
        H, Gr = self._reduced
        Gr = np.array(Gr, dtype=np.int64)
        return _enum.quadratic_form(Gr), Gr, np.array(H, dtype=np.int64)

    # serialization --------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {"name": self.name, "rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EvenLattice":
        lat = cls(obj["name"], tuple(tuple(r) for r in obj["gram"]))
        if "rank" in obj and int(obj["rank"]) != lat.rank:
            raise LatticeError("rank field disagrees with Gram matrix")
        return lat

    @classmethod
    def from_file(cls, path) -> "EvenLattice":
        return cls.from_json_obj(json.loads(Path(path).read_text()))

    def direct_sum(self, other: "EvenLattice", name: str | None = None) -> "EvenLattice":
        n, m = self.rank, other.rank
        G = [list(r) + [0] * m for r in self.gram] + [[0] * n + list(r) for r in other.gram]
        return EvenLattice(name or f"{self.name}+{other.name}", tuple(map(tuple, G)))


FIXTURES = ("A1", "A2", "E8", "E8E8", "D16plus", "Leech")


@lru_cache(maxsize=None)
def load_lattice(name: str) -> EvenLattice:
    """Built-in fixture by name, or a JSON file path."""
    p = Path(name)
    if p.suffix == ".json" and p.exists():
        return EvenLattice.from_file(p)
    ref = resources.files("voapart") / "data" / "lattices" / f"{name}.json"
    if not ref.is_file():
        raise LatticeError(f"unknown lattice {name!r}; built-ins are {', '.join(FIXTURES)}")
    return EvenLattice.from_json_obj(json.loads(ref.read_text()))


def trivial_lattice() -> EvenLattice:
    return EvenLattice("zero", ())


# ---------------------------------------------------------------------------
# enumeration

def _check_even(maxnorm: int):
    if maxnorm < 0:
        raise LatticeError("maxnorm must be non-negative")


def count_by_norm(L: EvenLattice, maxnorm: int, workers: int = 1) -> list[int]:
    """counts[m] = #{x : <x,x> = 2m} for 2m <= maxnorm."""
    _check_even(maxnorm)
    maxnorm -= maxnorm % 2
    if L.rank == 0:
        return [1] + [0] * (maxnorm // 2)
    q, Gr, _ = L._qform
    lo, hi = _enum.top_range(q, maxnorm)
    chunks = _split(lo, hi, workers)
    total = np.zeros(maxnorm // 2 + 1, np.int64)
    if workers > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            futs = [ex.submit(_enum.walk, q, Gr, maxnorm, a, b) for a, b in chunks]
            for f in futs:
                total += f.result()[0]
    else:
        for a, b in chunks:
            total += _enum.walk(q, Gr, maxnorm, a, b)[0]
    return [int(c) for c in total]


def _split(lo, hi, workers):
    if workers <= 1:
        return [(lo, hi)]
    vals = list(range(lo, hi + 1))
    k = max(1, min(workers, len(vals)))
    size = -(-len(vals) // k)
    return [(vals[i], vals[min(i + size, len(vals)) - 1]) for i in range(0, len(vals), size)]


def short_vectors(L: EvenLattice, maxnorm: int) -> np.ndarray:
    """All x (original coordinates) with <x,x> <= maxnorm, as an int64 array."""
    _check_even(maxnorm)
    if L.rank == 0:
        return np.zeros((1, 0), np.int64)
    q, Gr, H = L._qform
    lo, hi = _enum.top_range(q, maxnorm)
    counts, _, found = _enum.walk(q, Gr, maxnorm, lo, hi)
    _, vecs, found2 = _enum.walk(q, Gr, maxnorm, lo, hi, cap=int(found))
    assert found2 == found
    # y in reduced coordinates -> x = H^T y
    return vecs @ H


def enumerate_by_norm(L: EvenLattice, maxnorm: int) -> dict[int, list[tuple]]:
    vecs = short_vectors(L, maxnorm)
    G = np.array(L.gram, dtype=np.int64) if L.rank else np.zeros((0, 0), np.int64)
    norms = np.einsum("ij,jk,ik->i", vecs, G, vecs) if L.rank else np.zeros(1, np.int64)
    out: dict[int, list[tuple]] = {}
    order = np.lexsort(vecs.T[::-1]) if L.rank else [0]
    for i in order:
        out.setdefault(int(norms[i]), []).append(tuple(int(v) for v in vecs[i]))
    return dict(sorted(out.items()))


def enumerate_box(L: EvenLattice, maxnorm: int, budget: int = 10 ** 7) -> dict[int, int]:
    """Independent oracle: exhaustive search over the box |x_i| <= sqrt(maxnorm (G^-1)_ii).

    Raises BudgetError when the box has more than ``budget`` points.
    """
    from .linalg import inverse

    n = L.rank
    if n == 0:
        return {0: 1}
    Ginv = inverse([list(r) for r in L.gram])
    bounds = [math.isqrt(int(maxnorm * Ginv[i][i])) for i in range(n)]
    size = math.prod(2 * b + 1 for b in bounds)
    if size > budget:
        raise BudgetError(f"box of {size} points exceeds the budget {budget}")
    G = np.array(L.gram, dtype=np.int64)
    grids = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    counts: dict[int, int] = {}
    # iterate over the first coordinate, vectorize the rest
    rest = np.array(np.meshgrid(*grids[1:], indexing="ij")).reshape(n - 1, -1).T if n > 1 else np.zeros((1, 0), np.int64)
    for x0 in grids[0]:
        X = np.concatenate([np.full((rest.shape[0], 1), x0, np.int64), rest], axis=1)
        norms = np.einsum("ij,jk,ik->i", X, G, X)
        sel = norms[norms <= maxnorm]
        for v, c in zip(*np.unique(sel, return_counts=True)):
            counts[int(v)] = counts.get(int(v), 0) + int(c)
    return dict(sorted(counts.items()))


def theta_genus1(L: EvenLattice, N: int, workers: int = 1) -> USeries:
    counts = count_by_norm(L, 2 * N, workers)
    return USeries.from_list(counts, N)


def theta_genus2(L: EvenLattice, maxT: int, chunk: int = 256) -> dict[tuple, int]:
    """Representation numbers r_L(T) for T = [[a, b], [b, c]] with a, c <= maxT.

    Keys are (a, b, c) with a = <v1,v1>/2, c = <v2,v2>/2 and b = <v1,v2>/2
    (a half-integer, stored as Fraction).
    """
    vecs = short_vectors(L, 2 * maxT)
    G = np.array(L.gram, dtype=np.int64) if L.rank else np.zeros((0, 0), np.int64)
    if L.rank == 0:
        return {(0, Fraction(0), 0): 1}
    norms = np.einsum("ij,jk,ik->i", vecs, G, vecs)
    classes = {a: vecs[norms == 2 * a] for a in range(maxT + 1)}
    out: dict[tuple, int] = {}
    for a in range(maxT + 1):
        for c in range(maxT + 1):
            V1, V2 = classes[a], classes[c]
            if not len(V1) or not len(V2):
                continue
            bmax = int(math.isqrt(4 * a * c))
            hist = np.zeros(2 * bmax + 1, np.int64)
            W = (V2 @ G).astype(np.float32)
            for s in range(0, len(V1), chunk):
                ip = V1[s:s + chunk].astype(np.float32) @ W.T
                ipi = np.rint(ip).astype(np.int64).ravel()
                hist += np.bincount(ipi + bmax, minlength=2 * bmax + 1)
            for idx, cnt in enumerate(hist):
                if cnt:
                    out[(a, Fraction(idx - bmax, 2), c)] = int(cnt)
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# lattice VOA grading, cocycle, bilinear form

def lattice_voa_graded_dim(L: EvenLattice, n: int) -> int:
    """dim (V_L)_n = sum_m r_L(2m) p_rank(n - m)."""
    if n < 0:
        return 0
    theta = count_by_norm(L, 2 * n)
    p = colored_partition_numbers(L.rank, n)
    return sum(theta[m] * p[n - m] for m in range(n + 1))


def lattice_voa_graded_dims(L: EvenLattice, N: int) -> list[int]:
    theta = count_by_norm(L, 2 * N)
    p = colored_partition_numbers(L.rank, N)
    return [sum(theta[m] * p[n - m] for m in range(n + 1)) for n in range(N + 1)]


@dataclass(frozen=True)
class Cocycle:
    """epsilon(a, b) = (-1)^(a^T B b) with B - B^T = G (mod 2)."""

    B: tuple

    @classmethod
    def standard(cls, L: EvenLattice) -> "Cocycle":
        n = L.rank
        G = L.gram
        B = [[0] * n for _ in range(n)]
        for i in range(n):
            B[i][i] = G[i][i] // 2
            for j in range(i):
                B[i][j] = G[i][j]
        return cls(tuple(map(tuple, B)))

    def exponent(self, a, b) -> int:
        B = self.B
        return sum(a[i] * B[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])

    def __call__(self, a, b) -> int:
        return -1 if self.exponent(a, b) % 2 else 1


LatticeVOAState = tuple  # (FockState, charge tuple)


def voa_state_weight(L: EvenLattice, state) -> Fraction:
    fock, charge = state
    return sum(n for _, n in fock) + Fraction(L.norm(charge), 2)


@lru_cache(maxsize=None)
def _charges_up_to(L: EvenLattice, maxnorm: int):
    return enumerate_by_norm(L, maxnorm)


def lattice_voa_basis(L: EvenLattice, k: int) -> list:
    """Monomial basis (fock, charge) of (V_L)_k, ordered by charge norm then lex."""
    out = []
    for nrm, vecs in _charges_up_to(L, 2 * k).items():
        fw = k - nrm // 2
        for fock in fock_basis(L.rank, fw) if L.rank else ((),) if fw == 0 else ():
            for v in vecs:
                out.append((fock, v))
    return out


def heisenberg_frame(L: EvenLattice):
    """Rational orthogonal frame f_c of L (x) Q from G = L D L^T.

    Returns (Lmat, D): lattice vector e_i = sum_c Lmat[i][c] f_c, <f_c, f_d> = D_c delta.
    """
    if L.rank == 0:
        return [], []
    return ldl(L.gram)


def kappa(L: EvenLattice, cocycle: Cocycle, alpha) -> int:
    """(e^alpha, e^-alpha) = (-1)^(<a,a>/2) epsilon(alpha, -alpha)."""
    neg = tuple(-a for a in alpha)
    return (-1) ** (L.norm(alpha) // 2) * cocycle(alpha, neg)


def lattice_bilinear(L: EvenLattice, cocycle: Cocycle, metric, u, v) -> Fraction:
    (fu, a), (fv, b) = u, v
    if any(x + y for x, y in zip(a, b)) or fu != fv:
        return Fraction(0)
    return fock_bilinear(fu, fv, metric) * kappa(L, cocycle, a)


@dataclass(frozen=True)
class BilinearGram:
    weight: int
    basis: list
    matrix: list

    def is_symmetric(self) -> bool:
        n = len(self.basis)
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(i))


def lattice_bilinear_gram(L: EvenLattice, k: int, cocycle: Cocycle | None = None) -> BilinearGram:
    cocycle = cocycle or Cocycle.standard(L)
    _, D = heisenberg_frame(L)
    B = lattice_voa_basis(L, k)
    M = [[lattice_bilinear(L, cocycle, D, u, v) for v in B] for u in B]
    return BilinearGram(k, B, M)
