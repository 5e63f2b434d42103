import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.discrepancy import check_feasibility, discrepancy, indicator_matrix, inner_products
from app.core.errors import DimensionError, PreconditionError
from app.instances.generator import generate
from app.models.instances import GeneratorSpec
from app.models.set_systems import Coloring, ConstraintSet, DiscrepancyReport, FractionalColoring, SetSystem


def test_indicator_pair():
    cs = indicator_matrix(SetSystem(n=3, sets=((0, 1),)))
    np.testing.assert_array_equal(cs.rows, [[1.0, 1.0, 0.0]])
    assert cs.norms[0] == pytest.approx(math.sqrt(2))
    np.testing.assert_array_equal(cs.thresholds, [0.0])


def test_indicator_empty_system():
    cs = indicator_matrix(SetSystem(n=2, sets=()))
    assert cs.m == 0
    assert cs.n == 2


def test_indicator_norms_squared_are_set_sizes():
    cs = indicator_matrix(SetSystem(n=4, sets=((0,), (0, 1, 2, 3))))
    np.testing.assert_array_equal(cs.rows, [[1, 0, 0, 0], [1, 1, 1, 1]])
    np.testing.assert_array_equal(cs.norms ** 2, [1.0, 4.0])


def test_empty_set_is_a_zero_row():
    cs = indicator_matrix(SetSystem(n=3, sets=((), (1,))))
    np.testing.assert_array_equal(cs.nonzero, [False, True])


def test_discrepancy_examples(triangle):
    assert discrepancy(Coloring(chi=[1, 1, 1]), triangle).max_abs == 2
    assert discrepancy(Coloring(chi=[1, -1]), SetSystem(n=2, sets=((0, 1),))).max_abs == 0
    report = discrepancy(Coloring(chi=[1, -1]), SetSystem(n=2, sets=()))
    assert report.max_abs == 0
    assert report.per_constraint == []


def test_discrepancy_length_mismatch(triangle):
    with pytest.raises(DimensionError):
        discrepancy(Coloring(chi=[1, 1]), triangle)


def test_discrepancy_matches_inner_products():
    sys_ = generate(GeneratorSpec(kind="bernoulli", n=20, m=15, param=0.4, seed=5))
    rng = np.random.default_rng(0)
    for _ in range(10):
        chi = Coloring(chi=rng.choice([-1, 1], size=20))
        direct = discrepancy(chi, sys_)
        via_rows = inner_products(chi.chi.astype(float), indicator_matrix(sys_))
        assert direct.per_constraint == via_rows.per_constraint
        assert direct.max_abs == via_rows.max_abs


def test_bound_sets_satisfied(triangle):
    chi = Coloring(chi=[1, 1, 1])
    assert discrepancy(chi, triangle, bound=2.0).satisfied
    assert not discrepancy(chi, triangle, bound=1.5).satisfied


def test_feasibility_boundary():
    result = check_feasibility([0.0], 16)
    assert result.total == pytest.approx(1.0)
    assert result.feasible
    assert result.slack == pytest.approx(0.0)


def test_feasibility_all_zero_is_infeasible():
    assert not check_feasibility(np.zeros(16), 16).feasible


def test_feasibility_exact_equality_passes():
    n = 64
    c = np.full(n, 4.0 * math.sqrt(math.log(16.0)))
    result = check_feasibility(c, n)
    assert result.total == pytest.approx(n / 16)
    assert result.feasible


def test_feasibility_rejects_negative():
    with pytest.raises(PreconditionError):
        check_feasibility([1.0, -0.5], 16)


def test_feasibility_is_monotone():
    rng = np.random.default_rng(3)
    for _ in range(50):
        c = rng.uniform(0, 8, size=10)
        before = check_feasibility(c, 12).feasible
        c[rng.integers(10)] += rng.uniform(0, 2)
        if before:
            assert check_feasibility(c, 12).feasible


def test_set_system_rejects_unsorted_and_out_of_range():
    with pytest.raises(ValidationError):
        SetSystem(n=3, sets=((1, 0),))
    with pytest.raises(ValidationError):
        SetSystem(n=3, sets=((0, 3),))
    with pytest.raises(ValidationError):
        SetSystem(n=3, sets=((1, 1),))


def test_frequencies():
    sys_ = SetSystem(n=3, sets=((0, 1), (1,), (1, 2)))
    np.testing.assert_array_equal(sys_.frequencies(), [1, 3, 1])


def test_constraint_set_checks_norms():
    with pytest.raises(ValidationError):
        ConstraintSet(n=2, rows=[[3.0, 4.0]], norms=[5.1], thresholds=[0.0])
    cs = ConstraintSet(n=2, rows=[[3.0, 4.0]], norms=[5.0], thresholds=[1.0])
    assert cs.m == 1


def test_constraint_set_rejects_negative_thresholds():
    with pytest.raises(ValidationError):
        ConstraintSet.from_rows([[1.0, 0.0]], thresholds=[-1.0])


def test_constraint_set_is_read_only():
    cs = ConstraintSet.from_rows([[1.0, 2.0]])
    with pytest.raises(ValueError):
        cs.rows[0, 0] = 5.0


def test_restrict_and_normalize():
    cs = ConstraintSet.from_rows([[1.0, 2.0, 2.0], [0.0, 0.0, 5.0]], thresholds=[1.0, 2.0])
    restricted = cs.restrict(np.array([0, 1]))
    assert restricted.n == 2
    np.testing.assert_allclose(restricted.norms, [math.sqrt(5), 0.0])
    unit, c, idx = restricted.normalized()
    np.testing.assert_array_equal(idx, [0])
    np.testing.assert_allclose(np.linalg.norm(unit, axis=1), [1.0])
    np.testing.assert_array_equal(c, [1.0])


def test_fractional_coloring_box():
    FractionalColoring(x=[1.0 + 1e-10, -1.0])
    with pytest.raises(ValidationError):
        FractionalColoring(x=[1.0 + 1e-6])
    with pytest.raises(ValidationError):
        FractionalColoring(x=[np.nan])


def test_coloring_entries_are_signs():
    assert Coloring(chi=[1.0, -1.0]).chi.dtype == np.int64
    with pytest.raises(ValidationError):
        Coloring(chi=[1, 0])


def test_report_max_must_match():
    with pytest.raises(ValidationError):
        DiscrepancyReport(per_constraint=[1.0, -3.0], max_abs=1.0)
    report = DiscrepancyReport(per_constraint=[1.0, -3.0], max_abs=3.0, bound=4.0, satisfied=True)
    assert report.to_report() == {"max_abs": 3.0, "per_constraint": [1.0, -3.0], "bound": 4.0, "satisfied": True}
