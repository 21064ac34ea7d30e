from fractions import Fraction as F

import pytest

from voapart.correlators import builtin_points
from voapart.errors import BudgetError, ShapeError
from voapart.models import heisenberg, lattice_model, trivial
from voapart.partition import (
    PartitionRequest,
    Separating,
    casimir_pair_correlator,
    compare_partitions,
    default_budget,
    embed,
    estimate_terms,
    genus1_oracle,
    normalized_partition,
    partition_series,
    plain_series,
    restrict_constant,
    tensor_partition_check,
    theta_pullback,
)
from voapart.series import QSeries, qseries_inv, qseries_mul

M1 = heisenberg(1)
G1A = builtin_points("g1a")


def test_casimir_pair_values():
    assert casimir_pair_correlator(M1, [0, 0], [(13, 7), (3, 1)]) == 1
    assert casimir_pair_correlator(M1, [1], [(3, 1)]) == F(-1, 4)
    assert casimir_pair_correlator(M1, [2], [(3, 1)]) == F(1, 4)


def test_genus_one_series():
    z = plain_series(M1, 1, 2, G1A)
    assert z == QSeries(1, 2, {(0,): 1, (1,): F(-1, 4), (2,): F(1, 4)})
    assert z == genus1_oracle(M1, 2, G1A)
    assert qseries_mul(qseries_inv(z), z) == QSeries.one(1, 2)


def test_zero_truncation_is_one():
    for model in (M1, lattice_model("A1")):
        assert plain_series(model, 2, 0, builtin_points("g2a")) == QSeries.one(2, 0)
    assert genus1_oracle(trivial(), 4, G1A) == QSeries.one(1, 4)


def test_point_dependence_only_through_t():
    a = plain_series(M1, 1, 4, (3, 1))
    b = plain_series(M1, 1, 4, (5, 2))
    # coefficient n scales as (w - z)^(-2n)
    for (n,), c in a.terms.items():
        assert c * F(2) ** (2 * n) == b.terms[(n,)] * F(3) ** (2 * n)


def test_separating_degeneration():
    req = PartitionRequest(M1, 2, 3, builtin_points("g2a"), Separating(1, 2, F(3, 2), 2))
    s = partition_series(req)
    assert s.num_vars == 3 and s.constant_term == 1
    z1 = plain_series(M1, 1, 3, [(13, 7)])
    z2 = plain_series(M1, 1, 3, [(3, 1)])
    assert restrict_constant(s, 2) == qseries_mul(embed(z1, [0], 2), embed(z2, [1], 2))


def test_request_validation():
    with pytest.raises(ShapeError):
        PartitionRequest(M1, 2, 2, G1A)
    with pytest.raises(ShapeError):
        PartitionRequest(M1, 2, 2, builtin_points("g2a"), Separating(2, 2, 1, 1))
    with pytest.raises(ShapeError):
        Separating(1, 2, 2, 1)


def test_budget():
    assert estimate_terms(M1, 1, 3) == 1 + 1 + 2 + 3
    with pytest.raises(BudgetError):
        plain_series(lattice_model("E8"), 1, 3, G1A, budget=1000)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("VOAPART_BUDGET", "123")
    assert default_budget() == 123
    monkeypatch.setenv("VOAPART_BUDGET", "-1")
    with pytest.raises(ShapeError):
        default_budget()


def test_normalizations():
    assert normalized_partition(heisenberg(2), 1, 3, G1A) == QSeries.one(1, 3)
    A1 = lattice_model("A1")
    assert normalized_partition(A1, 1, 2, G1A) == theta_pullback(A1.lattice, 2, G1A)


def test_tensor_with_trivial():
    assert tensor_partition_check(trivial(), M1, 1, 3, G1A)
    assert tensor_partition_check(M1, M1, 1, 2, G1A)


def test_compare():
    assert compare_partitions(M1, M1, 1, 3, G1A).equal
    with pytest.warns(UserWarning):
        res = compare_partitions(M1, heisenberg(2), 1, 3, G1A)
    assert not res.equal and res.exponent == (1,)
    assert str(res).startswith("differ at (1,)")
    res = compare_partitions(lattice_model("D16plus"), lattice_model("E8E8"), 1, 4, G1A)
    assert res.equal and res.method == "oracle"
    with pytest.raises(BudgetError):
        compare_partitions(lattice_model("D16plus"), lattice_model("E8E8"), 1, 4, G1A, method="casimir")


def test_moonshine_oracle_starts_with_196884():
    from voapart.models import parse_model

    V = parse_model("moonshine")
    z = genus1_oracle(V, 2, G1A)
    # dims 1, 0, 196884: coefficient of t^2 is 196884 (mu^2 = t^2 + ...)
    assert z.terms[(2,)] * 2 ** 4 == 196884
