from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from voapart import fock
from voapart.linalg import axpy
from voapart.series import colored_partition_numbers

H = lambda *ns: fock.canonical([(1, n) for n in ns])  # noqa: E731


def test_basis_small():
    assert fock.basis(1, 0) == ((),)
    assert set(fock.basis(1, 2)) == {H(2), H(1, 1)}
    assert len(fock.basis(2, 2)) == 5


@pytest.mark.parametrize("r", [1, 2, 3])
def test_dims_are_colored_partitions(r):
    assert [len(fock.basis(r, k)) for k in range(11)] == colored_partition_numbers(r, 10)


def test_scalar_product_values():
    assert fock.scalar_product((), ()) == 1
    assert fock.scalar_product(H(2), H(2)) == 2
    assert fock.scalar_product(H(1, 1), H(1, 1)) == 2
    assert fock.scalar_product(H(2), H(1, 1)) == 0


def test_bilinear_signs():
    assert fock.bilinear_form((), ()) == 1
    assert fock.bilinear_form(H(1), H(1)) == -1
    assert fock.bilinear_form(H(1, 1), H(1, 1)) == 2


def test_dual_basis():
    assert fock.dual_basis(1, 0) == [{(): 1}]
    assert fock.dual_basis(1, 1) == [{H(1): -1}]
    duals = dict(zip(fock.basis(1, 2), fock.dual_basis(1, 2)))
    assert duals[H(2)] == {H(2): F(-1, 2)}
    assert duals[H(1, 1)] == {H(1, 1): F(1, 2)}


def test_text_round_trip():
    s = fock.canonical([(2, 1), (1, 3), (1, 1)])
    assert fock.fock_str(s) == "h[1,-3] h[1,-1] h[2,-1]"
    assert fock.parse_fock(fock.fock_str(s)) == s
    with pytest.raises(ValueError):
        fock.parse_fock("h[1,2] junk")


def test_heisenberg_modes():
    vac = {(): F(1)}
    assert fock.heis_mode_apply(1, 1, {H(1): F(1)}) == vac
    v = fock.heis_mode_apply(1, -1, fock.heis_mode_apply(1, -1, vac))
    assert sum(c * d * fock.scalar_product(a, b) for a, c in v.items() for b, d in v.items()) == 2
    for k in range(5):
        for s in fock.basis(2, k):
            assert fock.heis_mode_apply(1, 0, {s: F(1)}) == {}


def test_l1_on_h2():
    assert fock.virasoro_mode(1, {H(2): F(1)}, 1) == {H(1): F(2)}


@pytest.mark.parametrize("r", [1, 2])
def test_l0_grading(r):
    for k in range(7):
        for s in fock.basis(r, k):
            assert fock.virasoro_mode(0, {s: F(1)}, r) == ({s: F(k)} if k else {})


def test_qp_dimensions():
    assert fock.qp_subspace(1, 1) == [{H(1): 1}]
    assert len(fock.qp_subspace(1, 2)) == 1
    assert len(fock.qp_subspace(1, 4)) == 2
    for r in (1, 2):
        for k in range(2, 7):
            assert len(fock.qp_subspace(r, k)) == len(fock.basis(r, k)) - len(fock.basis(r, k - 1))


def test_qp_is_orthogonal_to_descendants():
    (u,) = fock.qp_subspace(1, 2)
    desc = fock.virasoro_mode(-1, {H(1): F(1)}, 1)
    assert fock.bilinear_vec(u, desc) == 0


def test_gram_nondegenerate():
    for r in (1, 2):
        for k in range(6):
            assert all(fock.gram_diagonal(r, k))


def _mode_product(m, n, vec, r):
    return fock.virasoro_mode(m, fock.virasoro_mode(n, vec, r), r)


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 4), st.data())
def test_virasoro_bracket(m, n, k, data):
    r = data.draw(st.sampled_from([1, 2]))
    s = data.draw(st.sampled_from(fock.basis(r, k)))
    v = {s: F(1)}
    lhs = dict(_mode_product(m, n, v, r))
    axpy(lhs, -1, _mode_product(n, m, v, r))
    rhs = {}
    axpy(rhs, m - n, fock.virasoro_mode(m + n, v, r))
    if m + n == 0:
        axpy(rhs, F(r, 12) * (m ** 3 - m), v)
    assert {a: c for a, c in lhs.items() if c} == {a: c for a, c in rhs.items() if c}
