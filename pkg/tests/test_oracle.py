import itertools

import numpy as np
import pytest

from app.core.discrepancy import discrepancy
from app.core.errors import DimensionError, InstanceTooLarge
from app.core.oracle import brute_force_disc, verify_partial
from app.instances.generator import generate
from app.models.instances import GeneratorSpec
from app.models.set_systems import Coloring, ConstraintSet, SetSystem


def _exhaustive(sys_: SetSystem):
    best = None
    for chi in itertools.product([-1, 1], repeat=sys_.n):
        value = discrepancy(Coloring(chi=chi), sys_).max_abs
        if best is None or value < best[0]:
            best = (value, chi)
    return best


def test_singletons():
    result = brute_force_disc(SetSystem(n=3, sets=((0,), (1,), (2,))))
    assert result.opt_disc == 1
    assert result.n_enumerated == 8


def test_triangle(triangle):
    result = brute_force_disc(triangle)
    assert result.opt_disc == 2
    assert discrepancy(result.argmin, triangle).max_abs == 2


def test_empty_system():
    result = brute_force_disc(SetSystem(n=4, sets=()))
    assert result.opt_disc == 0
    np.testing.assert_array_equal(result.argmin.chi, [-1, -1, -1, -1])


def test_single_element():
    result = brute_force_disc(SetSystem(n=1, sets=((0,),)))
    assert result.opt_disc == 1
    assert result.n_enumerated == 2


def test_matches_exhaustive_search():
    for seed in range(5):
        sys_ = generate(GeneratorSpec(kind="bernoulli", n=8, m=6, param=0.5, seed=seed))
        value, chi = _exhaustive(sys_)
        result = brute_force_disc(sys_)
        assert result.opt_disc == value
        # the lexicographically first optimum
        np.testing.assert_array_equal(result.argmin.chi, chi)


def test_parallel_blocks_agree_with_single_worker():
    sys_ = generate(GeneratorSpec(kind="bernoulli", n=12, m=10, param=0.5, seed=7))
    a = brute_force_disc(sys_, workers=1)
    b = brute_force_disc(sys_, workers=4)
    assert a.opt_disc == b.opt_disc
    np.testing.assert_array_equal(a.argmin.chi, b.argmin.chi)


def test_invariant_under_permuting_elements():
    sys_ = generate(GeneratorSpec(kind="bernoulli", n=10, m=8, param=0.5, seed=2))
    perm = np.random.default_rng(0).permutation(10)
    permuted = SetSystem(n=10, sets=tuple(tuple(sorted(int(perm[i]) for i in s)) for s in sys_.sets))
    assert brute_force_disc(sys_).opt_disc == brute_force_disc(permuted).opt_disc


def test_no_sampled_coloring_beats_optimum():
    rng = np.random.default_rng(4)
    for seed in range(20):
        sys_ = generate(GeneratorSpec(kind="bernoulli", n=10, m=10, param=0.5, seed=seed))
        opt = brute_force_disc(sys_).opt_disc
        for _ in range(20):
            chi = Coloring(chi=rng.choice([-1, 1], size=10))
            assert discrepancy(chi, sys_).max_abs >= opt


def test_cap():
    with pytest.raises(InstanceTooLarge):
        brute_force_disc(SetSystem(n=25, sets=()))


def test_verify_at_start_point():
    cs = ConstraintSet.from_rows([[1.0, 1.0], [1.0, -1.0]], thresholds=[0.0, 0.0])
    check = verify_partial(np.zeros(2), np.zeros(2), cs, 0.08)
    assert check.thresholds_ok
    assert not check.near_ok
    assert not check.holds

    x0 = np.array([1.0, -0.95])
    check = verify_partial(x0, x0, cs, 0.08)
    assert check.holds
    assert check.n_near == 2


def test_verify_names_violated_constraint():
    cs = ConstraintSet.from_rows([[1.0, 0.0], [0.0, 1.0]], thresholds=[0.5, 0.5])
    x = np.array([0.5 + 2e-9, 0.0])
    check = verify_partial(x, np.zeros(2), cs, 0.08, eps_slack=1e-9)
    assert not check.thresholds_ok
    assert check.violating == [0]
    assert check.max_excess == pytest.approx(2e-9, rel=1e-3)


def test_verify_box():
    cs = ConstraintSet.from_rows(np.zeros((0, 2)), n=2)
    check = verify_partial(np.array([1.0 + 1e-6, 1.0]), np.zeros(2), cs, 0.08)
    assert check.near_ok
    assert not check.in_box
    assert "holds" in check.to_report()


def test_verify_shape_mismatch():
    cs = ConstraintSet.from_rows([[1.0, 0.0]])
    with pytest.raises(DimensionError):
        verify_partial(np.zeros(3), np.zeros(3), cs, 0.08)
