import pytest

from app.core.errors import PreconditionError
from app.instances.generator import generate
from app.models.instances import GeneratorSpec
from app.workflows.bench import BenchRunner, run_bench


@pytest.fixture
def small_system():
    return generate(GeneratorSpec(kind="bernoulli", n=16, m=16, param=0.5, seed=1))


def test_partial_bench_report(small_system):
    report = run_bench(small_system, target="partial", runs=6, seed=2, threads=2)
    assert report.runs == 6
    assert [r.run for r in report.per_run] == list(range(6))
    assert 0.0 <= report.success_rate <= 1.0
    assert 0.0 <= report.containment_rate <= 1.0
    assert report.mean_n_active_vars is not None
    assert set(report.discrepancy_quantiles) == {"q10", "q50", "q90"}
    assert set(report.baseline_quantiles) == {"q10", "q50", "q90"}


def test_bench_does_not_depend_on_thread_count(small_system):
    a = BenchRunner(small_system, runs=5, seed=3, threads=1).run()
    b = BenchRunner(small_system, runs=5, seed=3, threads=4).run()
    assert a.to_report() == b.to_report()


def test_pipeline_bench(small_system):
    report = run_bench(small_system, target="spencer", runs=2, seed=1)
    assert report.mean_n_active_vars is None
    assert all(r.discrepancy is not None for r in report.per_run if r.success)


def test_matrix_instances_only_support_walks():
    cs = generate(GeneratorSpec(kind="matrix-gaussian", n=8, m=4, seed=1))
    with pytest.raises(PreconditionError):
        BenchRunner(cs, target="spencer")
    report = run_bench(cs, target="partial", runs=2, seed=1)
    assert report.m == 4


@pytest.mark.slow
def test_walk_statistics_match_acceptance_thresholds():
    sys_ = generate(GeneratorSpec(kind="bernoulli", n=64, m=64, param=0.5, seed=1))
    report = run_bench(sys_, target="partial", runs=200, seed=1, delta=0.08)
    assert report.success_rate >= 0.05
    assert report.containment_rate >= 0.99
    assert report.mean_n_active_vars >= 0.50 * 64
    assert report.mean_n_active_disc <= 0.30 * 64
    assert report.mean_norm_sq <= 1.02 * 64
