from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from voapart.errors import BudgetError, LatticeError
from voapart.lattice import (
    Cocycle,
    EvenLattice,
    count_by_norm,
    enumerate_box,
    enumerate_by_norm,
    kappa,
    lattice_bilinear_gram,
    lattice_voa_graded_dim,
    lattice_voa_graded_dims,
    ldl,
    lll_reduce,
    load_lattice,
    theta_genus1,
    theta_genus2,
    trivial_lattice,
)
from voapart.series import colored_partition_numbers


def test_validation():
    with pytest.raises(LatticeError):
        EvenLattice("odd", ((1,),))
    with pytest.raises(LatticeError):
        EvenLattice("indef", ((2, 3), (3, 2)))
    with pytest.raises(LatticeError):
        EvenLattice("asym", ((2, 1), (0, 2)))


def test_fixture_determinants():
    dets = {"A1": 2, "A2": 3, "E8": 1, "E8E8": 1, "D16plus": 1, "Leech": 1}
    for name, d in dets.items():
        assert load_lattice(name).determinant == d


def test_ldl_reconstructs():
    G = load_lattice("E8").gram
    L, D = ldl(G)
    n = len(G)
    for i in range(n):
        for j in range(n):
            assert sum(L[i][c] * D[c] * L[j][c] for c in range(n)) == G[i][j]


def test_lll_preserves_lattice():
    G = ((2, 1, 1), (1, 4, 3), (1, 3, 8))
    H, G2 = lll_reduce(G)
    n = 3
    for i in range(n):
        for j in range(n):
            assert sum(H[i][a] * G[a][b] * H[j][b] for a in range(n) for b in range(n)) == G2[i][j]


def test_a1_enumeration():
    assert enumerate_by_norm(load_lattice("A1"), 2) == {0: [(0,)], 2: [(-1,), (1,)]}


def test_e8_roots_match_box_oracle():
    A2 = load_lattice("A2")
    assert count_by_norm(A2, 8) == [enumerate_box(A2, 8).get(2 * m, 0) for m in range(5)]
    E8 = load_lattice("E8")
    assert len(enumerate_by_norm(E8, 2)[2]) == 240
    with pytest.raises(BudgetError):
        enumerate_box(E8, 8)


def test_theta_examples():
    assert theta_genus1(load_lattice("E8"), 3).coeffs == (1, 240, 2160, 6720)
    assert theta_genus1(trivial_lattice(), 3).coeffs == (1, 0, 0, 0)
    assert theta_genus1(load_lattice("D16plus"), 5) == theta_genus1(load_lattice("E8E8"), 5)


def test_leech_roots_and_minimal_vectors():
    assert count_by_norm(load_lattice("Leech"), 4) == [1, 0, 196560]


def test_genus2_small():
    A1 = load_lattice("A1")
    reps = theta_genus2(A1, 1)
    assert reps[(0, F(0), 0)] == 1
    # (v1, v2) = (+-1, +-1) with <v1, v2> = 2, i.e. b = 1
    assert reps[(1, F(1), 1)] == 2
    assert reps[(1, F(-1), 1)] == 2
    assert theta_genus2(load_lattice("E8"), 0) == {(0, F(0), 0): 1}


def test_voa_dims():
    assert lattice_voa_graded_dim(load_lattice("E8"), 1) == 248
    assert lattice_voa_graded_dim(load_lattice("A1"), 1) == 3
    assert lattice_voa_graded_dims(load_lattice("A1"), 4) == [1, 3, 4, 7, 13]
    for name in ("A1", "A2", "E8"):
        assert lattice_voa_graded_dim(load_lattice(name), 0) == 1


@pytest.mark.parametrize("name", ["A1", "A2", "E8"])
def test_voa_dims_are_theta_times_partitions(name):
    L = load_lattice(name)
    N = 6
    theta = theta_genus1(L, N).coeffs
    p = colored_partition_numbers(L.rank, N)
    conv = [sum(theta[m] * p[n - m] for m in range(n + 1)) for n in range(N + 1)]
    assert lattice_voa_graded_dims(L, N) == conv


vec2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@given(vec2, vec2)
def test_cocycle_identity(a, b):
    L = load_lattice("A2")
    eps = Cocycle.standard(L)
    assert eps(a, b) == (-1) ** L.inner(a, b) * eps(b, a)


def test_bilinear_gram():
    A1 = load_lattice("A1")
    eps = Cocycle.standard(A1)
    g0 = lattice_bilinear_gram(A1, 0)
    assert g0.matrix == [[1]]
    g1 = lattice_bilinear_gram(A1, 1)
    assert g1.is_symmetric()
    idx = {s: i for i, s in enumerate(g1.basis)}
    a, na = ((), (1,)), ((), (-1,))
    assert g1.matrix[idx[a]][idx[na]] == -eps((1,), (-1,)) == kappa(A1, eps, (1,))
    assert g1.matrix[idx[a]][idx[a]] == 0


def test_json_fixture_round_trip(tmp_path):
    L = load_lattice("A2")
    path = tmp_path / "a2.json"
    import json

    path.write_text(json.dumps(L.to_json_obj()))
    assert load_lattice(str(path)).gram == L.gram
