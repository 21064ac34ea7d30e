from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from voapart.errors import CompositionError, NotInvertibleError, ShapeError
from voapart.series import (
    QSeries,
    USeries,
    colored_partition_numbers,
    compositions,
    lagrange_invert_mu,
    qseries_inv,
    qseries_mul,
    useries_compose,
)

rats = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def qs(g, N):
    exps = QSeries.one(g, N).exponents()
    return st.lists(rats, min_size=len(exps), max_size=len(exps)).map(
        lambda cs: QSeries(g, N, dict(zip(exps, cs))))


def test_difference_of_squares():
    a = QSeries(1, 2, {(0,): 1, (1,): 1})
    b = QSeries(1, 2, {(0,): 1, (1,): -1})
    assert qseries_mul(a, b) == QSeries(1, 2, {(0,): 1, (2,): -1})


def test_geometric_inverse():
    a = QSeries(1, 3, {(0,): 1, (1,): 1})
    assert qseries_inv(a) == QSeries(1, 3, {(0,): 1, (1,): -1, (2,): 1, (3,): -1})
    one = QSeries.one(1, 5)
    t = QSeries(1, 5, {(0,): 1, (1,): -1})
    assert qseries_mul(qseries_inv(t), t) == one
    assert qseries_inv(one) == one


def test_inverse_needs_constant_term():
    with pytest.raises(NotInvertibleError):
        qseries_inv(QSeries(1, 2, {(1,): 1}))


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        qseries_mul(QSeries.one(1, 2), QSeries.one(2, 2))


def test_truncation_drops_high_terms():
    s = QSeries(2, 2, {(0, 0): 1, (1, 1): 3, (2, 1): 5})
    assert s.terms == {(0, 0): 1, (1, 1): 3}


def test_json_round_trip():
    s = QSeries(2, 3, {(0, 0): 1, (1, 2): F(-3, 7)})
    obj = s.to_json_obj()
    assert obj["terms"][1] == {"exp": [1, 2], "num": "-3", "den": "7"}
    assert QSeries.from_json(s.to_json()) == s


@given(qs(2, 3), qs(2, 3), qs(2, 3))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a * QSeries.one(2, 3) == a


@given(qs(2, 3))
def test_inverse_property(a):
    if a.constant_term == 0:
        return
    assert qseries_mul(qseries_inv(a), a) == QSeries.one(2, 3)


def test_mu_catalan():
    assert lagrange_invert_mu(4).coeffs == (0, -1, 2, -5, 14)
    assert lagrange_invert_mu(1).coeffs == (0, -1)


@pytest.mark.parametrize("N", range(1, 13))
def test_mu_residual(N):
    mu = lagrange_invert_mu(N)
    one = USeries.from_list([1], N)
    lhs = mu * useries_inv_sq(one + mu, N)
    assert (lhs + USeries.t(N)).coeffs == (0,) * (N + 1)


def useries_inv_sq(a, N):
    from voapart.series import useries_inv

    inv = useries_inv(a)
    return inv * inv


def test_compose_examples():
    N = 2
    mu = lagrange_invert_mu(N)
    assert useries_compose(USeries.t(N), mu) == mu
    p = USeries.from_list(colored_partition_numbers(1, N))
    assert useries_compose(p, mu).coeffs == (1, -1, 4)
    assert useries_compose(p, USeries.zero(N)).coeffs == (1, 0, 0)
    with pytest.raises(CompositionError):
        useries_compose(p, USeries.from_list([1, 1]))


def test_compositions_count():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(3, 3))) == 10
