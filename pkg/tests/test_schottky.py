from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from voapart.errors import DegenerateMapError, NotLoxodromicError, ParabolicError
from voapart.schottky import (
    GaussRat,
    MoebiusMap,
    SchottkyGenerators,
    certified_radius,
    disks_disjoint,
    fixed_points_multiplier,
    from_wzq,
    gauss_sqrt,
    in_U_gr,
    parse_gauss,
    plumbing_check,
    to_wzq,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=9)
gauss = st.builds(GaussRat, small, small)


def test_example_map():
    m = from_wzq(4, -2, -8)
    assert m(None) == 4
    assert m.inverse()(None) == -2
    assert m(4) != 4
    assert m.compose(m.inverse()).is_identity()
    fp = fixed_points_multiplier(m)
    assert fp.exact and (fp.W, fp.Z, fp.mu) == (2, 0, F(1, 2))
    assert to_wzq(2, 0, F(1, 2)) == (4, -2, -8)
    inv = fixed_points_multiplier(m.inverse())
    assert (inv.W, inv.Z, inv.mu) == (0, 2, F(1, 2))


def test_errors():
    with pytest.raises(DegenerateMapError):
        from_wzq(1, 2, 0)
    with pytest.raises(ParabolicError):
        to_wzq(2, 0, 1)
    with pytest.raises(NotLoxodromicError):
        to_wzq(2, 0, 2)
    with pytest.raises(ParabolicError):
        fixed_points_multiplier(MoebiusMap(1, 1, 0, 1))
    with pytest.raises(NotLoxodromicError):
        fixed_points_multiplier(MoebiusMap(0, -1, 1, 0))


def test_swap_gives_inverse_generator():
    w, z, q = to_wzq(GaussRat(3, 1), GaussRat(-1, 2), F(1, 3))
    assert to_wzq(GaussRat(-1, 2), GaussRat(3, 1), F(1, 3)) == (z, w, q)
    assert from_wzq(z, w, q).same_as(from_wzq(w, z, q).inverse())


def test_node_limit():
    mu = F(1, 10 ** 6)
    w, z, q = to_wzq(2, 0, mu)
    assert (w - 2).abs2() < F(1, 10 ** 10) and z.abs2() < F(1, 10 ** 10)
    assert q.abs2() < F(1, 10 ** 10)
    # leading order: q = -mu (W - Z)^2 + O(mu^2)
    assert (q + 4 * mu).abs2() < (10 * mu ** 2) ** 2


@given(gauss, gauss, st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=20),
       st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=20))
def test_round_trip(W, Z, mr, mi):
    mu = GaussRat(mr, mi)
    assume(W != Z and mu and mu.abs2() < 1)
    w, z, q = to_wzq(W, Z, mu)
    fp = fixed_points_multiplier(from_wzq(w, z, q))
    assert fp.exact
    assert (fp.W, fp.Z, fp.mu) == (W, Z, mu)


def test_irrational_fixed_points():
    fp = fixed_points_multiplier(from_wzq(3, 1, F(1, 100)))
    assert not fp.exact and fp.error < 1e-40
    import mpmath

    with mpmath.workdps(60):
        mu, W, Z = fp.mu, fp.W, fp.Z
        w2 = (W - mu * Z) / (1 - mu)
        z2 = (Z - mu * W) / (1 - mu)
        q2 = -mu * (W - Z) ** 2 / (1 - mu) ** 2
        assert abs(w2 - 3) < 1e-20 and abs(z2 - 1) < 1e-20 and abs(q2 - F(1, 100)) < 1e-20


def test_u_gr_examples():
    g = SchottkyGenerators(((3, 1, F(1, 100)),))
    rep = in_U_gr(g, F(9, 10))
    assert rep.inside and rep.plus
    assert not in_U_gr(SchottkyGenerators(((3, 1, F(81, 100)),)), F(9, 10)).inside
    two = SchottkyGenerators(((3, 1, F(1, 100)), (1, -3, F(1, 100))))
    assert not in_U_gr(two, F(9, 10)).inside


@given(st.lists(st.tuples(gauss, gauss, gauss), min_size=1, max_size=3),
       st.fractions(min_value=F(1, 10), max_value=3, max_denominator=10))
def test_u_gr_implies_disjoint_disks(handles, r):
    assume(all(w != z and q for w, z, q in handles))
    gens = SchottkyGenerators(tuple(handles))
    if in_U_gr(gens, r).inside:
        assert disks_disjoint(gens)


@given(gauss, gauss, gauss, st.lists(gauss, min_size=1, max_size=5))
def test_plumbing(w, z, q, ys):
    assume(w != z and q)
    assert plumbing_check(SchottkyGenerators(((w, z, q),)), ys + [None])


def test_plumbing_example():
    gens = SchottkyGenerators(((4, -2, -8),))
    assert gens.maps()[0](0) == 0
    assert plumbing_check(gens, [0, None, -2])


def test_gauss_helpers():
    assert parse_gauss("1/2+3i") == GaussRat(F(1, 2), 3)
    assert parse_gauss("-i") == GaussRat(0, -1)
    assert gauss_sqrt(GaussRat(0, 2)) == GaussRat(1, 1)
    assert gauss_sqrt(GaussRat(2)) is None
    assert certified_radius((3, 1)) == F(9, 10)
