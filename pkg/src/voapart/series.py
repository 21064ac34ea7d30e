"""Truncated power series with exact rational coefficients.

``QSeries`` is a sparse multivariate series in the sewing parameters
q_1..q_g truncated by total degree; ``USeries`` is a dense one-variable
series used for the genus-one substitution t -> mu(t).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CompositionError, NotInvertibleError, ShapeError

Exp = tuple


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QSeries:
    num_vars: int
    trunc: int
    terms: Mapping[Exp, Fraction] = field(default_factory=dict)
    per_var: tuple | None = None

    def __post_init__(self):
        if self.num_vars < 0 or self.trunc < 0:
            raise ShapeError("num_vars and trunc must be non-negative")
        if self.per_var is not None and len(self.per_var) != self.num_vars:
            raise ShapeError("per-variable truncation needs one bound per variable")
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != self.num_vars:
                raise ShapeError(f"exponent {e} has wrong length for {self.num_vars} vars")
            if any(x < 0 for x in e):
                raise ShapeError(f"negative exponent {e}")
            if not self.admits(e):
                continue
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    def admits(self, e: Exp) -> bool:
        if sum(e) > self.trunc:
            return False
        if self.per_var is not None and any(x > b for x, b in zip(e, self.per_var)):
            return False
        return True

    # constructors -------------------------------------------------------
    @classmethod
    def one(cls, num_vars: int, trunc: int, per_var=None) -> "QSeries":
        return cls(num_vars, trunc, {(0,) * num_vars: Fraction(1)}, per_var)

    @classmethod
    def constant(cls, c, num_vars: int, trunc: int, per_var=None) -> "QSeries":
        return cls(num_vars, trunc, {(0,) * num_vars: _frac(c)}, per_var)

    @classmethod
    def variable(cls, i: int, num_vars: int, trunc: int, per_var=None) -> "QSeries":
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, trunc, {tuple(e): Fraction(1)}, per_var)

    # access -------------------------------------------------------------
    def __getitem__(self, e) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def coefficient(self, *e) -> Fraction:
        if len(e) == 1 and isinstance(e[0], tuple):
            e = e[0]
        return self[e]

    @property
    def constant_term(self) -> Fraction:
        return self[(0,) * self.num_vars]

    def exponents(self) -> list[Exp]:
        """All admissible exponent vectors in graded-lexicographic order."""
        out = []
        for d in range(self.trunc + 1):
            for e in compositions(d, self.num_vars):
                if self.admits(e):
                    out.append(e)
        return out

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.num_vars, self.trunc, self.per_var, self.terms) == (
            other.num_vars, other.trunc, other.per_var, other.terms)

    def __hash__(self):
        return hash((self.num_vars, self.trunc, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"QSeries({self.num_vars}, {self.trunc}, {self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            mono = "*".join(
                f"q{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
            c = self.terms[e]
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "QSeries"):
        if not isinstance(other, QSeries):
            raise ShapeError("expected a QSeries")
        if (self.num_vars, self.trunc, self.per_var) != (other.num_vars, other.trunc, other.per_var):
            raise ShapeError(
                f"shape mismatch: ({self.num_vars},{self.trunc}) vs ({other.num_vars},{other.trunc})")

    def _like(self, terms) -> "QSeries":
        return QSeries(self.num_vars, self.trunc, terms, self.per_var)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.num_vars, self.trunc, self.per_var)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qseries_mul(self, other)
        c = _frac(other)
        return self._like({e: c * v for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return qseries_inv(self) ** (-n)
        result = QSeries.one(self.num_vars, self.trunc, self.per_var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, trunc: int) -> "QSeries":
        return QSeries(self.num_vars, trunc, self.terms, self.per_var)

    def restrict(self, var: int, power: int) -> "QSeries":
        """Part of the series in which variable ``var`` has exactly ``power``,
        returned with that variable removed."""
        out = {}
        for e, c in self.terms.items():
            if e[var] == power:
                out[e[:var] + e[var + 1:]] = c
        per_var = None if self.per_var is None else self.per_var[:var] + self.per_var[var + 1:]
        return QSeries(self.num_vars - 1, self.trunc - power, out, per_var)

    # serialization ------------------------------------------------------
    def to_json_obj(self) -> dict:
        terms = [
            {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ]
        obj = {"vars": self.num_vars, "trunc": self.trunc, "terms": terms}
        if self.per_var is not None:
            obj["per_var"] = list(self.per_var)
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QSeries":
        terms = {
            tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in obj["terms"]
        }
        per_var = tuple(obj["per_var"]) if obj.get("per_var") is not None else None
        return cls(int(obj["vars"]), int(obj["trunc"]), terms, per_var)

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_obj(json.loads(text))

    def csv_rows(self) -> list[list[str]]:
        header = [f"n{i + 1}" for i in range(self.num_vars)] + ["num", "den"]
        rows = [header]
        for e, c in sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            rows.append([str(x) for x in e] + [str(c.numerator), str(c.denominator)])
        return rows


def compositions(total: int, parts: int) -> Iterable[Exp]:
    """Exponent vectors of length ``parts`` summing to ``total`` (lex descending)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    a._check(b)
    out: dict = {}
    trunc = a.trunc
    bt = sorted(b.terms.items(), key=lambda kv: sum(kv[0]))
    for ea, ca in a.terms.items():
        da = sum(ea)
        for eb, cb in bt:
            if da + sum(eb) > trunc:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return a._like(out)


def qseries_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse up to truncation, via the finite geometric series."""
    c0 = a.constant_term
    if not c0:
        raise NotInvertibleError("series with zero constant term is not invertible")
    inv0 = 1 / c0
    # a = c0 (1 - x) with x of positive order; 1/a = inv0 * sum_{k<=N} x^k
    x = QSeries.one(a.num_vars, a.trunc, a.per_var) - a * inv0
    total = QSeries.one(a.num_vars, a.trunc, a.per_var)
    power = total
    for _ in range(a.trunc):
        power = power * x
        if not power.terms:
            break
        total = total + power
    return total * inv0


def qseries_equal_report(a: QSeries, b: QSeries):
    """First exponent (graded lex) where a and b differ, or None."""
    a._check(b)
    for e in a.exponents():
        if a[e] != b[e]:
            return e, a[e], b[e]
    return None


@dataclass(frozen=True)
class USeries:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        if not self.coeffs:
            raise ShapeError("USeries needs at least the constant coefficient")

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_list(cls, coeffs, trunc: int | None = None) -> "USeries":
        coeffs = list(coeffs)
        if trunc is not None:
            coeffs = (coeffs + [0] * (trunc + 1))[: trunc + 1]
        return cls(tuple(coeffs))

    @classmethod
    def zero(cls, trunc: int) -> "USeries":
        return cls((0,) * (trunc + 1))

    @classmethod
    def t(cls, trunc: int) -> "USeries":
        return cls.from_list([0, 1], trunc)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "USeries") -> "USeries":
        n = min(self.trunc, other.trunc)
        return USeries(tuple(self[i] + other[i] for i in range(n + 1)))

    def __sub__(self, other: "USeries") -> "USeries":
        n = min(self.trunc, other.trunc)
        return USeries(tuple(self[i] - other[i] for i in range(n + 1)))

    def __mul__(self, other):
        if not isinstance(other, USeries):
            c = _frac(other)
            return USeries(tuple(c * x for x in self.coeffs))
        n = min(self.trunc, other.trunc)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return USeries(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "USeries":
        if k < 0:
            return useries_inv(self) ** (-k)
        out = USeries.from_list([1], self.trunc)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, trunc: int) -> "USeries":
        return USeries.from_list(self.coeffs, trunc)

    def to_qseries(self, scale=1) -> QSeries:
        """Substitute t = scale * q and return a one-variable QSeries."""
        s = _frac(scale)
        return QSeries(1, self.trunc, {(n,): c * s ** n for n, c in enumerate(self.coeffs)})


def useries_inv(a: USeries) -> USeries:
    if not a[0]:
        raise NotInvertibleError("series with zero constant term is not invertible")
    n = a.trunc
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / a[0]
    for k in range(1, n + 1):
        s = sum(a[j] * out[k - j] for j in range(1, k + 1))
        out[k] = -s / a[0]
    return USeries(tuple(out))


def useries_compose(outer: USeries, inner: USeries) -> USeries:
    """outer(inner(t)) truncated at min(trunc); inner must vanish at t = 0."""
    if inner[0]:
        raise CompositionError("inner series must have zero constant term")
    n = min(outer.trunc, inner.trunc)
    inner = inner.truncate(n)
    acc = USeries.from_list([outer[n]], n)
    for k in range(n - 1, -1, -1):
        acc = acc * inner + USeries.from_list([outer[k]], n)
    return acc


def lagrange_invert_mu(N: int) -> USeries:
    """mu(t) with mu(0) = 0 and mu / (1 + mu)^2 = -t, modulo t^(N+1).

    Fixed-point iteration mu <- -t (1 + mu)^2; each step fixes one more order.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    one = USeries.from_list([1], N)
    mu = USeries.zero(N)
    t = USeries.t(N)
    for _ in range(N):
        s = one + mu
        mu = (t * s * s) * -1
    return mu


def product_series(exponents: Iterable[tuple[int, int]], N: int) -> USeries:
    """prod (1 - t^n)^(e_n) over the given (n, e_n) pairs, truncated at N."""
    out = USeries.from_list([1], N)
    for n, e in exponents:
        if n > N or e == 0:
            continue
        f = USeries.from_list([1] + [0] * (n - 1) + [-1], N)
        out = out * (f ** e)
    return out


def colored_partition_numbers(r: int, N: int) -> list[int]:
    """Coefficients of prod_n (1 - t^n)^(-r), i.e. r-colored partition counts."""
    s = product_series(((n, -r) for n in range(1, N + 1)), N)
    return [int(c) for c in s.coeffs]


def total_degree_terms(num_vars: int, trunc: int) -> int:
    return sum(1 for _ in itertools.chain.from_iterable(
        compositions(d, num_vars) for d in range(trunc + 1)))
