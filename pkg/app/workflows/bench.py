#File: app/workflows/bench.py
#Description: Multi-run benchmark over independent seeds: walk statistics or full
#pipeline discrepancies, compared against uniformly random colorings.

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Literal, Optional, Union

import numpy as np
import pandas as pd

from ..config.logging_config import logger
from ..config.settings import settings
from ..core.discrepancy import indicator_matrix
from ..core.errors import PreconditionError, RetriesExhausted
from ..core.rng import derive_seed
from ..instances.generator import random_coloring_baseline
from ..models.bench import BenchReport, RunRecord
from ..models.colorings import BeckFialaParams, SpencerParams, default_alpha
from ..models.set_systems import ConstraintSet, FractionalColoring, SetSystem
from .edge_walk import edge_walk, make_walk_params
from .full_coloring import BeckFialaColorer, SpencerColorer

QUANTILES = (0.1, 0.5, 0.9)

BenchTarget = Literal["partial", "spencer", "beckfiala"]


def _quantiles(values: pd.Series) -> Dict[str, float]:
    values = values.dropna()
    if values.empty:
        return {}
    return {f"q{int(q * 100):02d}": float(values.quantile(q)) for q in QUANTILES}


class BenchRunner:
    """Runs `runs` independent seeded trials and aggregates them.

    Run k uses seed derive_seed(seed, k), so results do not depend on thread
    scheduling and are sorted by run index before aggregation.
    """

    def __init__(self, instance: Union[SetSystem, ConstraintSet], target: BenchTarget = "partial",
                 runs: int = 100, seed: int = 0, delta: Optional[float] = None,
                 gamma: Optional[float] = None, big_c: Optional[float] = None, k1: Optional[float] = None,
                 threshold: Optional[float] = None, degree_t: Optional[int] = None,
                 eps_slack: Optional[float] = None, threads: Optional[int] = None):
        if runs < 1:
            raise PreconditionError("runs must be >= 1")
        if target != "partial" and not isinstance(instance, SetSystem):
            raise PreconditionError(f"the {target} bench needs a set system, not a matrix")
        self.instance = instance
        self.target = target
        self.runs = runs
        self.seed = seed
        self.delta = delta
        self.gamma = gamma
        self.big_c = big_c
        self.k1 = k1
        self.threshold = threshold
        self.degree_t = degree_t
        self.eps_slack = eps_slack
        self.threads = max(1, threads or settings.THREADS)

        if isinstance(instance, SetSystem):
            self.constraints = indicator_matrix(instance)
        else:
            self.constraints = instance
        self.n = self.constraints.n
        self.m = self.constraints.m

    # -- single runs -------------------------------------------------------------

    def _walk_constraints(self) -> ConstraintSet:
        c = self.threshold
        if c is None:
            c = default_alpha(max(int(self.constraints.nonzero.sum()), 1), self.n)
        return self.constraints.with_thresholds(c)

    def _run_partial(self, k: int, constraints: ConstraintSet) -> RunRecord:
        seed = derive_seed(self.seed, k)
        delta = self.delta if self.delta is not None else settings.DEFAULT_DELTA
        params = make_walk_params(
            delta, self.n, int(constraints.nonzero.sum()),
            gamma=self.gamma, big_c=self.big_c, k1=self.k1, eps_slack=self.eps_slack, seed=seed,
        )
        outcome = edge_walk(constraints, FractionalColoring.zeros(self.n), params)
        values = constraints.rows @ outcome.x.x if constraints.m else np.zeros(0)
        return RunRecord(
            run=k, seed=seed, success=outcome.success, contained=outcome.contained,
            n_active_vars=outcome.n_active_vars, n_active_disc=outcome.n_active_disc,
            norm_sq=outcome.norm_sq, discrepancy=float(np.max(np.abs(values), initial=0.0)),
            steps=outcome.steps,
        )

    def _run_pipeline(self, k: int) -> RunRecord:
        seed = derive_seed(self.seed, k)
        try:
            if self.target == "spencer":
                colorer = SpencerColorer(self.instance, SpencerParams(
                    delta=self.delta, big_c=self.big_c, gamma=self.gamma, seed=seed))
            else:
                degree = self.degree_t or int(self.instance.frequencies().max(initial=1))
                colorer = BeckFialaColorer(self.instance, BeckFialaParams(
                    degree_t=max(degree, 1), delta=self.delta, big_c=self.big_c, gamma=self.gamma, seed=seed))
            result = colorer.run()
        except RetriesExhausted as e:
            logger.warning(f"Bench run {k} failed: {e}")
            return RunRecord(run=k, seed=seed, success=False, contained=False)
        return RunRecord(run=k, seed=seed, success=result.report.satisfied, contained=True,
                         discrepancy=result.report.max_abs)

    # -- aggregation ---------------------------------------------------------------

    def run(self) -> BenchReport:
        logger.info(f"Bench ({self.target}): n={self.n}, m={self.m}, runs={self.runs}, "
                    f"seed={self.seed}, threads={self.threads}")
        if self.target == "partial":
            constraints = self._walk_constraints()
            job = lambda k: self._run_partial(k, constraints)
        else:
            job = self._run_pipeline

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            records = sorted(pool.map(job, range(self.runs)), key=lambda r: r.run)

        frame = pd.DataFrame([r.model_dump() for r in records])
        baseline = pd.Series(random_coloring_baseline(self.instance, self.runs, self.seed))

        def mean(column: str) -> Optional[float]:
            values = frame[column].dropna()
            return float(values.mean()) if not values.empty else None

        report = BenchReport(
            target=self.target,
            n=self.n,
            m=self.m,
            runs=self.runs,
            seed=self.seed,
            success_rate=float(frame["success"].mean()),
            containment_rate=float(frame["contained"].mean()),
            mean_n_active_vars=mean("n_active_vars"),
            mean_n_active_disc=mean("n_active_disc"),
            mean_norm_sq=mean("norm_sq"),
            discrepancy_quantiles=_quantiles(frame["discrepancy"].astype(float)),
            baseline_quantiles=_quantiles(baseline),
            per_run=records,
        )
        logger.info(f"Bench done: success_rate={report.success_rate:.3f}, "
                    f"containment_rate={report.containment_rate:.3f}, "
                    f"median disc={report.discrepancy_quantiles.get('q50')}, "
                    f"median baseline={report.baseline_quantiles.get('q50')}")
        return report


def run_bench(instance: Union[SetSystem, ConstraintSet], target: BenchTarget = "partial", runs: int = 100,
              seed: int = 0, **options) -> BenchReport:
    return BenchRunner(instance, target=target, runs=runs, seed=seed, **options).run()
