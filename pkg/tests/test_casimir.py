from fractions import Fraction as F

import pytest

from voapart.casimir import (
    casimir_element,
    casimir_endo_vacuum,
    descendant_norm_sq,
    gamma_qp_relation_check,
    printed_coefficient,
    pv_automorphism_invariant,
    pv_filtration,
    trace_orthogonality_check,
    true_coefficient,
    zero_mode_trace,
)
from voapart.correlators import builtin_points
from voapart.models import heisenberg, lattice_model
from voapart.partition import plain_series

M1 = heisenberg(1)


def test_casimir_elements():
    assert casimir_element(M1, 0, 0).vector == {M1.vacuum(): 1}
    assert casimir_element(M1, 0, -1).vector == {}
    nu = M1.conformal_vector()
    assert casimir_element(M1, 1, -1).vector == {s: -2 * c for s, c in nu.items()}
    assert casimir_element(M1, 2, 3).vector == {}
    for k in range(1, 4):
        for j in range(-2, k + 1):
            el = casimir_element(M1, k, j)
            assert all(M1.weight(s) == k - j for s in el.vector)


def test_endomorphism_moments():
    assert casimir_endo_vacuum(M1, []) == 1
    for m in range(-2, 3):
        for n in range(-2, 3):
            if m + n:
                assert casimir_endo_vacuum(M1, [(1, m, n)]) == 0


def test_moments_match_genus_one_q1():
    # <gamma_1(w, z)> = sum_n (C_1(n, -n)) w^(-n-1) z^(n-1) = -(w - z)^(-2)
    for n in range(1, 6):
        assert casimir_endo_vacuum(M1, [(1, n, -n)]) == -n
    z = plain_series(M1, 1, 1, builtin_points("g1a"))
    assert z.terms[(1,)] == F(-1, 4)


def test_descendant_norm_matches_form():
    for model in (M1, lattice_model("A1")):
        for j in (1, 2):
            for u, ud in model.qp_dual_pairs(j):
                for m in range(3):
                    a, b = u, ud
                    for _ in range(m):
                        a, b = model.virasoro(-1, a), model.virasoro(-1, b)
                    assert model.form_vec(a, b) == descendant_norm_sq(j, m)


def test_coefficients():
    assert printed_coefficient(1, 1) == true_coefficient(1, 1) == 1
    assert printed_coefficient(2, 2) == 2 and true_coefficient(2, 2) == 1
    assert true_coefficient(2, 1) == F(1, 2)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_relation_solve(k):
    rep = gamma_qp_relation_check(M1, k, [(3, 1), (5, 2)])
    assert rep.solved_exact
    assert rep.solved == {j: true_coefficient(k, j) for j in rep.solved}
    assert rep.printed_matches == (k <= 1)


def test_relation_four_point():
    h = {((1, 1),): F(1)}
    rep = gamma_qp_relation_check(M1, 2, [(9, 7)], extra=(h, 3, h, 1))
    assert rep.four_point_exact


def test_pv_small():
    pv = pv_filtration(M1, 5)
    assert pv.dims == [1, 0, 1, 1, 3, 3]
    assert pv.stable
    assert pv.contains(M1.conformal_vector(), 2)
    assert pv_automorphism_invariant(M1, pv)
    again = pv_filtration(M1, 5)
    assert again.dims == pv.dims


def test_pv_a1():
    A1 = lattice_model("A1")
    pv = pv_filtration(A1, 2)
    assert pv.dims[:2] == [1, 0]
    assert pv.contains(A1.conformal_vector(), 2)
    assert pv_automorphism_invariant(A1, pv)


def test_trace_orthogonality():
    pv = pv_filtration(M1, 3)
    for d in range(4):
        rep = trace_orthogonality_check(M1, d, 4, pv)
        assert rep.ok
    rep = trace_orthogonality_check(M1, 1, 4, pv)
    assert rep.complement_dim == 1
    # the control vector nu gives Tr_{V_k} L_0 = k dim V_k, nonzero
    assert rep.control == {k: k * n for k, n in enumerate([1, 1, 2, 3, 5])}
    assert zero_mode_trace(M1, M1.conformal_vector(), 3) == 9
