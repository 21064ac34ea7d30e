import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from voapart.correlators import (
    PointConfig,
    builtin_points,
    mode_oracle,
    two_point_check,
    wick_correlator,
)
from voapart.errors import DomainError, PoleError, ShapeError
from voapart.models import heisenberg, lattice_model, parse_model, tensor, trivial

M1 = heisenberg(1)
M2 = heisenberg(2)
A1 = lattice_model("A1")
A2 = lattice_model("A2")
ONE = F(1)

h = {((1, 1),): ONE}
hh = {((1, 1), (1, 1)): ONE}


def test_heisenberg_examples():
    assert wick_correlator(M1, [(h, 3), (h, 1)]) == F(1, 4)
    assert wick_correlator(M1, [(h, 3)]) == 0
    assert wick_correlator(M1, [(hh, 3), (hh, 1)]) == F(1, 8)
    assert mode_oracle(M1, [(h, 3), (h, 1)]).value == F(1, 4)
    assert mode_oracle(M1, [(h, 3)]).value == 0


def test_three_point_with_conformal_vector():
    nu = M1.conformal_vector()
    items = [(h, 7), (h, 3), (nu, 1)]
    res = mode_oracle(M1, items)
    assert res.certified
    assert res.value == wick_correlator(M1, items) != 0


def test_oracle_unshifted_path():
    # (5, -3, 2) shifted by -2 is (3, -5, 0): not ordered, so the full expansion runs
    A1 = lattice_model("A1")
    e, ne = {(((1, 1),), (1,)): F(1)}, {((), (-1,)): F(1)}
    hh = {(((1, 1),), (0,)): F(1)}
    for model, vs in ((M1, [h, h, nu2]), (A1, [e, ne, hh])):
        items = list(zip(vs, (F(5), F(-3), F(2))))
        res = mode_oracle(model, items)
        assert res.certified and res.value == wick_correlator(model, items)


nu2 = {((1, 1), (1, 1)): F(1, 2)}


def test_pole_and_domain_errors():
    with pytest.raises(PoleError):
        wick_correlator(M1, [(h, 2), (h, 2)])
    with pytest.raises(DomainError):
        mode_oracle(M1, [(h, 1), (h, 3)])
    with pytest.raises(DomainError):
        PointConfig((1, 3))
    with pytest.raises(ShapeError):
        PointConfig((3, 2, 1))
    with pytest.raises(ShapeError):
        builtin_points("nope")


def test_two_point_rule():
    assert two_point_check(M1, h, h, 3, 1) == F(1, 4)
    for model in (M1, M2, A1):
        nu = model.conformal_vector()
        c = model.central_charge
        assert model.form_vec(nu, nu) == F(c, 2)
        assert two_point_check(model, nu, nu, 5, 2) == F(c, 2) / 3 ** 4
    h1, h2 = {((1, 1),): ONE}, {((2, 1),): ONE}
    assert two_point_check(M2, h1, h2, 3, 1) == 0


def test_charge_conservation():
    e = lambda a: {((), (a,)): ONE}  # noqa: E731
    assert wick_correlator(A1, [(e(1), 3), (e(1), 1)]) == 0
    assert wick_correlator(A1, [(e(1), 3), (e(-1), 1)]) != 0


def test_lattice_two_point_matches_oracle():
    e, ne = {((), (1,)): ONE}, {((), (-1,)): ONE}
    assert wick_correlator(A1, [(e, 3), (ne, 1)]) == mode_oracle(A1, [(e, 3), (ne, 1)]).value


def _random_vector(model, rng, maxw=3):
    k = rng.randint(0, maxw)
    basis = model.basis(k)
    picks = rng.sample(basis, min(2, len(basis)))
    return {s: F(rng.randint(-3, 3) or 1, rng.randint(1, 3)) for s in picks}


@pytest.mark.parametrize("seed", range(5))
def test_permutation_symmetry_heisenberg(seed):
    rng = random.Random(seed)
    model = M2
    vecs = [_random_vector(model, rng) for _ in range(4)]
    xs = [F(p) for p in (11, 5, 2, -1)]
    base = wick_correlator(model, list(zip(vecs, xs)))
    for perm in itertools.permutations(range(4)):
        assert wick_correlator(model, [(vecs[i], xs[i]) for i in perm]) == base


@pytest.mark.parametrize("seed", range(3))
def test_permutation_symmetry_lattice(seed):
    rng = random.Random(100 + seed)
    a, b = (rng.randint(-1, 1), rng.randint(-1, 1)), (rng.randint(-1, 1), rng.randint(-1, 1))
    charges = [a, b, (-a[0], -a[1]), (-b[0], -b[1])]
    vecs = []
    for ch in charges:
        fk = rng.choice([(), ((1, 1),), ((2, 1),), ((1, 2),)])
        vecs.append({(fk, ch): ONE})
    xs = [F(9), F(4), F(-2), F(1, 3)]
    base = wick_correlator(A2, list(zip(vecs, xs)))
    for perm in itertools.permutations(range(4)):
        assert wick_correlator(A2, [(vecs[i], xs[i]) for i in perm]) == base


def test_scaling_quasi_primary():
    # correlators of quasi-primaries of weights k_i scale as lambda^(-sum k_i)
    nu = M1.conformal_vector()
    (w4,) = [v for v in M1.qp_subspace(4)][:1]
    items = [(h, 7), (h, 3), (nu, 2), (w4, 1)]
    lam = F(2)
    val = wick_correlator(M1, items)
    scaled = wick_correlator(M1, [(v, lam * x) for v, x in items])
    assert scaled * lam ** (1 + 1 + 2 + 4) == val


@given(st.sampled_from(["M1", "M2", "A1"]), st.integers(0, 3), st.data())
def test_wick_equals_mode_oracle_two_point(name, k, data):
    model = {"M1": M1, "M2": M2, "A1": A1}[name]
    s = data.draw(st.sampled_from(model.basis(k)))
    t = data.draw(st.sampled_from(model.basis(k)))
    items = [({s: ONE}, F(5)), ({t: ONE}, F(2))]
    res = mode_oracle(model, items)
    assert res.certified and res.value == wick_correlator(model, items)


def test_vacuum_and_creation_properties():
    vac = {M1.vacuum(): ONE}
    for k in range(4):
        for s in M1.basis(k):
            v = {s: ONE}
            assert M1.vertex_apply(vac, v, 6) == {k: v}
            comps = M1.vertex_apply(v, vac, k + 2)
            # Y(a, z) Omega = exp(z L_{-1}) a
            assert comps[k] == v
            assert comps.get(k + 1, {}) == M1.virasoro(-1, v)


def test_tensor_model_wick_factorizes():
    T = tensor(M1, A1)
    s = (((1, 1),), ((), (1,)))
    t = (((1, 1),), ((), (-1,)))
    val = T.wick([(s, F(3)), (t, F(1))])
    assert val == M1.wick([(((1, 1),), F(3)), (((1, 1),), F(1))]) * A1.wick([(((), (1,)), F(3)), (((), (-1,)), F(1))])
    assert T.graded_dims(3) == [1, 4, 9, 20]  # (1,1,2,3) * (1,3,4,7)


def test_parse_model():
    assert parse_model("heisenberg:2").central_charge == 2
    assert parse_model("lattice:E8").central_charge == 8
    assert parse_model("tensor:lattice:E8,lattice:E8").central_charge == 16
    assert parse_model("trivial").graded_dims(3) == [1, 0, 0, 0]
    assert parse_model("moonshine").graded_dims(3) == [1, 0, 196884, 21493760]
    with pytest.raises(ShapeError):
        parse_model("bogus:1")
