"""Sparse exact linear algebra over the rationals.

Vectors are plain dicts ``{basis_key: Fraction}`` with zero entries pruned.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable

Vec = dict


def axpy(acc: Vec, coeff, vec: Vec) -> Vec:
    """acc += coeff * vec, in place; returns acc."""
    if not coeff:
        return acc
    for key, val in vec.items():
        new = acc.get(key, 0) + coeff * val
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)
    return acc


def vec_sum(pairs: Iterable[tuple]) -> Vec:
    out: Vec = {}
    for coeff, vec in pairs:
        axpy(out, coeff, vec)
    return out


def scale(vec: Vec, coeff) -> Vec:
    if not coeff:
        return {}
    return {k: coeff * v for k, v in vec.items()}


def clean(vec: Vec) -> Vec:
    return {k: v for k, v in vec.items() if v}


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace.

    Pivot order is the order given by ``order`` (a sort key on basis keys);
    every stored row has leading coefficient 1 on its pivot.
    """

    def __init__(self, order=None):
        self.order = order or (lambda key: key)
        self.rows: dict[Hashable, Vec] = {}
        self.vectors: list[Vec] = []

    def __len__(self):
        return len(self.rows)

    def _pivot(self, vec: Vec):
        return min(vec, key=self.order)

    def reduce(self, vec: Vec) -> Vec:
        vec = dict(vec)
        while vec:
            # eliminate every pivot present; loop because elimination may add new keys
            hit = [k for k in vec if k in self.rows]
            if not hit:
                break
            for k in hit:
                c = vec.get(k)
                if c:
                    axpy(vec, -c, self.rows[k])
        return vec

    def add(self, vec: Vec) -> bool:
        """Insert ``vec``; returns True when it was independent of the span."""
        rem = self.reduce(vec)
        if not rem:
            return False
        piv = self._pivot(rem)
        rem = scale(rem, Fraction(1) / rem[piv])
        # keep rows reduced against the new pivot
        for key, row in self.rows.items():
            c = row.get(piv)
            if c:
                axpy(row, -c, rem)
        self.rows[piv] = rem
        self.vectors.append(vec)
        return True

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def basis(self) -> list[Vec]:
        return [self.rows[k] for k in sorted(self.rows, key=self.order)]


def rank(vectors: Iterable[Vec]) -> int:
    ech = Echelon(order=repr)
    for v in vectors:
        ech.add(v)
    return len(ech)


def nullspace(matrix: list[list], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} for a dense rational matrix (list of rows)."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows = [[Fraction(x) for x in r] for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rows[i][fc]
        basis.append(x)
    return basis


def solve(matrix: list[list], rhs: list) -> list[Fraction] | None:
    """Exact solution of a (possibly overdetermined) system, or None if inconsistent.

    Free variables, if any, are set to zero.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in aug[r:]):
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = aug[i][-1]
    return x


def inverse(matrix: list[list]) -> list[list[Fraction]]:
    n = len(matrix)
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        x = solve(matrix, e)
        if x is None:
            raise ZeroDivisionError("singular matrix")
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def determinant(matrix: list[list]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det
