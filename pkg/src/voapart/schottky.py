"""Moebius maps over the Gaussian rationals and Schottky coordinates.

A handle is parametrized either by (w, z, q), with generator
gamma(x) = w + q / (x - z), or by its fixed points and multiplier (W, Z, mu).
All modulus comparisons use squared moduli, so U_{g,r} membership is exact.
Maps are kept as unnormalized matrices in GL(2); projective invariants use
tr^2 / det.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .errors import DegenerateMapError, NotLoxodromicError, ParabolicError, ShapeError


# ---------------------------------------------------------------------------
# Q(i)

@dataclass(frozen=True)
class GaussRat:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (tuple, list)):
            return cls(*x)
        if isinstance(x, str):
            return parse_gauss(x)
        return cls(Fraction(x))

    def __add__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRat.of(o))

    def __rsub__(self, o):
        return GaussRat.of(o) - self

    def __mul__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inv(self):
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * GaussRat.of(o).inv()

    def __rtruediv__(self, o):
        return GaussRat.of(o) * self.inv()

    def __pow__(self, n: int):
        out = GaussRat(1)
        base = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, o):
        try:
            o = GaussRat.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def to_mpc(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"GaussRat({self})"


def parse_gauss(text: str) -> GaussRat:
    """'3', '-1/2', '1/2+3i', '2-i', 'i'."""
    t = text.replace(" ", "")
    if not t.endswith("i"):
        return GaussRat(Fraction(t))
    body = t[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    while cut > 0 and body[cut - 1] in "eE/":
        cut = max(body.rfind("+", 0, cut), body.rfind("-", 0, cut))
    re_part, im_part = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return GaussRat(Fraction(re_part), Fraction(im_part))


def _rat_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def gauss_sqrt(z: GaussRat) -> GaussRat | None:
    """A square root in Q(i) (principal branch, re >= 0), or None."""
    r = _rat_sqrt(z.abs2())
    if r is None:
        return None
    a = _rat_sqrt((r + z.re) / 2)
    b = _rat_sqrt((r - z.re) / 2)
    if a is None or b is None:
        return None
    root = GaussRat(a, b if z.im >= 0 else -b)
    return root if root * root == z else None


# ---------------------------------------------------------------------------
# Moebius maps

@dataclass(frozen=True)
class MoebiusMap:
    """x -> (a x + b) / (c x + d), ad - bc != 0 (projective class)."""

    a: GaussRat
    b: GaussRat
    c: GaussRat
    d: GaussRat

    def __post_init__(self):
        for f in "abcd":
            object.__setattr__(self, f, GaussRat.of(getattr(self, f)))
        if not self.det:
            raise DegenerateMapError("singular Moebius matrix")

    @property
    def det(self) -> GaussRat:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> GaussRat:
        return self.a + self.d

    def invariant(self) -> GaussRat:
        """tr^2 / det; equals tr^2 for the determinant-one representative."""
        return self.trace * self.trace / self.det

    def __call__(self, x):
        """Image of x; None stands for the point at infinity."""
        if x is None:
            return None if not self.c else self.a / self.c
        x = GaussRat.of(x)
        den = self.c * x + self.d
        if not den:
            return None
        return (self.a * x + self.b) / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self o other."""
        return MoebiusMap(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def derivative(self, x) -> GaussRat:
        x = GaussRat.of(x)
        return self.det / (self.c * x + self.d) ** 2

    def same_as(self, other: "MoebiusMap") -> bool:
        """Equality in PGL(2): proportional matrices."""
        m1 = (self.a, self.b, self.c, self.d)
        m2 = (other.a, other.b, other.c, other.d)
        return all(x * y2 == x2 * y for x, y in zip(m1, m2) for x2, y2 in zip(m1, m2))

    def is_identity(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def kind(self) -> str:
        """'loxodromic', 'parabolic', 'elliptic' or 'identity'."""
        if self.is_identity():
            return "identity"
        t = self.invariant()
        if t.im == 0 and 0 <= t.re <= 4:
            return "parabolic" if t.re == 4 else "elliptic"
        return "loxodromic"


def from_wzq(w, z, q) -> MoebiusMap:
    """gamma(x) = w + q / (x - z) = (w x + q - w z) / (x - z)."""
    w, z, q = GaussRat.of(w), GaussRat.of(z), GaussRat.of(q)
    if not q:
        raise DegenerateMapError("q = 0 gives a constant map")
    return MoebiusMap(w, q - w * z, GaussRat(1), -z)


# ---------------------------------------------------------------------------
# fixed points and multipliers

@dataclass(frozen=True)
class FixedPoints:
    W: object          # attracting fixed point
    Z: object          # repelling fixed point
    mu: object         # multiplier at W, 0 < |mu| < 1
    exact: bool
    error: float = 0.0  # bound on |value - true value| when inexact


def fixed_points_multiplier(m: MoebiusMap, dps: int = 50) -> FixedPoints:
    """Attracting/repelling fixed points and multiplier of a loxodromic map.

    Exact over Q(i) when the discriminant tr^2 - 4 det is a square there;
    otherwise mpmath values at ``dps`` digits with an error estimate from a
    second evaluation at twice the precision.
    """
    kind = m.kind()
    if kind == "parabolic":
        raise ParabolicError("parabolic map has a single fixed point")
    if kind != "loxodromic":
        raise NotLoxodromicError(f"{kind} map has no attracting fixed point")
    disc = (m.a - m.d) ** 2 + 4 * m.b * m.c
    root = gauss_sqrt(disc)
    if root is not None:
        if m.c:
            roots = [(m.a - m.d + s * root) / (2 * m.c) for s in (1, -1)]
        else:
            # affine map x -> (a x + b) / d: fixed points b / (d - a) and infinity
            roots = [m.b / (m.d - m.a), None]
        mus = [_multiplier(m, x) for x in roots]
        i = 0 if mus[0].abs2() < 1 else 1
        return FixedPoints(roots[i], roots[1 - i], mus[i], True)
    lo = _numeric_fixed(m, dps)
    hi = _numeric_fixed(m, 2 * dps)
    err = max(abs(x - y) for x, y in zip(lo, hi))
    return FixedPoints(*hi, False, float(err) * 10)


def _multiplier(m: MoebiusMap, x) -> GaussRat:
    if x is None:
        # at infinity the multiplier is d / a for the affine map x -> (a x + b) / d
        return m.d / m.a
    return m.derivative(x)


def _numeric_fixed(m: MoebiusMap, dps: int):
    with mpmath.workdps(dps):
        a, b, c, d = (x.to_mpc() for x in (m.a, m.b, m.c, m.d))
        root = mpmath.sqrt((a - d) ** 2 + 4 * b * c)
        xs = [(a - d + root) / (2 * c), (a - d - root) / (2 * c)]
        det = a * d - b * c
        mus = [det / (c * x + d) ** 2 for x in xs]
        i = 0 if abs(mus[0]) < 1 else 1
        return xs[i], xs[1 - i], mus[i]


def to_wzq(W, Z, mu):
    """(w, z, q) from attracting point W, repelling point Z and multiplier mu."""
    W, Z, mu = GaussRat.of(W), GaussRat.of(Z), GaussRat.of(mu)
    if mu == 1:
        raise ParabolicError("mu = 1 is parabolic")
    if not mu:
        raise DegenerateMapError("mu = 0 is the node")
    if mu.abs2() >= 1:
        raise NotLoxodromicError("|mu| must be < 1")
    if W == Z:
        raise ParabolicError("W = Z is parabolic")
    one = 1 - mu
    w = (W - mu * Z) / one
    z = (Z - mu * W) / one
    q = -mu * (W - Z) ** 2 / (one * one)
    return w, z, q


def from_fixed_points(W, Z, mu) -> MoebiusMap:
    return from_wzq(*to_wzq(W, Z, mu))


# ---------------------------------------------------------------------------
# U_{g,r}

@dataclass(frozen=True)
class SchottkyGenerators:
    handles: tuple     # ((w, z, q), ...)

    def __post_init__(self):
        hs = tuple(tuple(GaussRat.of(x) for x in h) for h in self.handles)
        for w, z, q in hs:
            if not q:
                raise DegenerateMapError("q_i must be non-zero")
            if w == z:
                raise ShapeError("w_i must differ from z_i")
        object.__setattr__(self, "handles", hs)

    @property
    def genus(self) -> int:
        return len(self.handles)

    def centers(self):
        return [x for w, z, _ in self.handles for x in (w, z)]

    def maps(self):
        return [from_wzq(*h) for h in self.handles]

    @classmethod
    def from_points(cls, points, qs) -> "SchottkyGenerators":
        pairs = points.pairs() if hasattr(points, "pairs") else points
        return cls(tuple((w, z, q) for (w, z), q in zip(pairs, qs)))


@dataclass(frozen=True)
class URReport:
    inside: bool
    plus: bool          # |w_1| > |z_1| > |w_2| > ... > |z_g|
    reasons: tuple


def in_U_gr(gens: SchottkyGenerators, r) -> URReport:
    """0 < |q_i| < r^2 and |x - y| > 2r for distinct centers, on squared moduli."""
    r = Fraction(r)
    if r <= 0:
        raise ShapeError("r must be positive")
    reasons = []
    for i, (_, _, q) in enumerate(gens.handles):
        if not 0 < q.abs2() < r ** 4:
            reasons.append(f"|q_{i + 1}| >= r^2")
    cs = gens.centers()
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if not (cs[i] - cs[j]).abs2() > 4 * r * r:
                reasons.append(f"centers {i} and {j} closer than 2r")
    mods = [c.abs2() for c in cs]
    plus = all(a > b for a, b in zip(mods, mods[1:]))
    return URReport(not reasons, plus, tuple(reasons))


def disks_disjoint(gens: SchottkyGenerators, dps: int = 40) -> bool:
    """Closed disks of radius sqrt|q_i| about w_i and z_i are pairwise disjoint."""
    with mpmath.workdps(dps):
        rad = []
        for w, z, q in gens.handles:
            rho = mpmath.sqrt(mpmath.sqrt(mpmath.mpf(q.abs2().numerator) / q.abs2().denominator))
            rad += [rho, rho]
        cs = gens.centers()
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                d2 = (cs[i] - cs[j]).abs2()
                d = mpmath.sqrt(mpmath.mpf(d2.numerator) / d2.denominator)
                if not d > rad[i] + rad[j]:
                    return False
    return True


def certified_radius(points, shrink=Fraction(9, 10)) -> Fraction:
    """A rational r with every PointConfig center pairwise farther apart than 2r.

    Any sewing parameters with |q_i| < r^2 then lie in U_{g,r}.
    """
    pts = [GaussRat.of(p) for p in (points.points if hasattr(points, "points") else points)]
    if len(pts) < 2:
        raise ShapeError("need at least one (w, z) pair")
    dmin2 = min((a - b).abs2() for i, a in enumerate(pts) for b in pts[i + 1:])
    # largest rational r <= shrink * dmin / 2 from a rational lower bound on dmin
    root = _rat_sqrt(dmin2)
    if root is None:
        root = Fraction(isqrt(dmin2.numerator * 10 ** 6 // dmin2.denominator), 1000)
    return shrink * root / 2


# ---------------------------------------------------------------------------

def plumbing_check(gens: SchottkyGenerators, samples) -> bool:
    """x = gamma_i(y) iff (x - w_i)(y - z_i) = q_i, on exact samples y.

    At y = infinity the image is w_i (the relation degenerates to x - w_i = 0
    after multiplying through by 1/y).  A perturbed x must violate the relation.
    """
    for (w, z, q), g in zip(gens.handles, gens.maps()):
        for y in samples:
            if y is None:
                if g(None) != w:
                    return False
                continue
            y = GaussRat.of(y)
            if y == z:
                if g(y) is not None:
                    return False
                continue
            x = g(y)
            if (x - w) * (y - z) != q:
                return False
            if (x + 1 - w) * (y - z) == q:
                return False
    return True
