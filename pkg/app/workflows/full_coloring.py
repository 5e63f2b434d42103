#File: app/workflows/full_coloring.py
#Description: Full colorings built from repeated partial colorings: the recursive
#pipeline for general set systems, the bounded-degree pipeline, the per-set
#threshold partial coloring, and randomized rounding.

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.logging_config import logger
from ..core.discrepancy import check_feasibility, discrepancy, indicator_matrix
from ..core.errors import PreconditionError, RetriesExhausted
from ..core.rng import Stream, derive_seed, make_rng
from ..models.colorings import (
    BeckFialaParams,
    PipelineResult,
    RoundRecord,
    SpencerParams,
    default_delta,
    default_rounds,
    default_walk_retries,
    poly_delta,
)
from ..models.set_systems import Coloring, ConstraintSet, DiscrepancyReport, FractionalColoring, SetSystem
from .edge_walk import PartialColorer, make_walk_params


def randomized_sign(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """chi_i = +1 with probability (1 + x_i)/2, so E[chi_i] = x_i."""
    x = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    return np.where(rng.random(x.shape[0]) < (1.0 + x) / 2.0, 1, -1).astype(np.int64)


def round_randomized(x: FractionalColoring, constraints: ConstraintSet, delta: float, retries: int,
                     rng: np.random.Generator) -> Coloring:
    """Randomized rounding, accepted once max_j |<chi - x, v_j>| <= sqrt(n)."""
    values = np.asarray(x.x, dtype=np.float64)
    n_loose = int(np.sum(np.abs(values) < 1.0 - delta))
    if n_loose:
        logger.warning(f"Rounding {n_loose} coordinates with |x_i| < 1 - delta")
    limit = math.sqrt(x.n)
    for attempt in range(retries):
        chi = randomized_sign(values, rng)
        if constraints.m == 0:
            return Coloring(chi=chi)
        error = float(np.max(np.abs(constraints.rows @ (chi - values))))
        if error <= limit:
            logger.debug(f"Rounding accepted on attempt {attempt + 1} (max error {error:.3f} <= {limit:.3f})")
            return Coloring(chi=chi)
    logger.error(f"Randomized rounding failed {retries} times")
    raise RetriesExhausted(f"rounding error exceeded sqrt(n) in all {retries} attempts")


def sign_round(x: np.ndarray) -> np.ndarray:
    """Nearest +-1 coloring; zeros go to +1."""
    return np.where(np.asarray(x) >= 0.0, 1, -1).astype(np.int64)


class RecursiveColorer:
    """Fixes at least half of the remaining coordinates per round until none are left.

    Subclasses choose the per-round thresholds and the final rounding.
    """

    require_feasible = True

    def __init__(self, sys: SetSystem, delta: float, max_rounds: int, walk_retries: int, seed: int,
                 big_c: Optional[float] = None, gamma: Optional[float] = None):
        self.sys = sys
        self.delta = delta
        self.max_rounds = max_rounds
        self.walk_retries = walk_retries
        self.seed = seed
        self.big_c = big_c
        self.gamma = gamma
        self.constraints = indicator_matrix(sys)

    def round_thresholds(self, restricted: ConstraintSet, n_r: int) -> Tuple[np.ndarray, float]:
        raise NotImplementedError

    def recurse(self) -> Tuple[np.ndarray, List[RoundRecord], np.ndarray]:
        """Returns the fractional point, the round history and the still-unfixed coordinates."""
        n, m = self.sys.n, self.sys.m
        x = np.zeros(n)
        free = np.arange(n)
        rounds: List[RoundRecord] = []
        for r in range(self.max_rounds):
            n_r = free.size
            if n_r == 0:
                break
            restricted = self.constraints.restrict(free)
            thresholds, alpha = self.round_thresholds(restricted, n_r)
            round_constraints = restricted.with_thresholds(thresholds)
            params = make_walk_params(
                self.delta, n_r, m,
                gamma=self.gamma,
                big_c=self.big_c,
                max_retries=self.walk_retries,
                seed=derive_seed(self.seed, r),
            )
            logger.debug(f"Round {r}: n_r={n_r}, alpha={alpha:.4f}, gamma={params.gamma:.3g}, T={params.t_steps}")
            try:
                colorer = PartialColorer(round_constraints, FractionalColoring(x=x[free]), params,
                                         require_feasible=self.require_feasible)
                outcome, used = colorer.run()
            except RetriesExhausted as e:
                raise RetriesExhausted(
                    f"round {r} (n_r={n_r}): {e}",
                    best=e.best,
                    progress={"x": x.tolist(), "rounds": [rec.model_dump() for rec in rounds],
                              "unfixed": free.tolist()},
                ) from e

            x[free] = outcome.x.x
            remaining = free[np.abs(outcome.x.x) < 1.0 - self.delta]
            assert 2 * remaining.size <= n_r, "a successful round fixes at least half the coordinates"
            rounds.append(RoundRecord(n_r=n_r, alpha=alpha, retries_used=used))
            free = remaining

        if free.size:
            logger.warning(f"{free.size} coordinates still unfixed after {self.max_rounds} rounds")
        return x, rounds, free


class SpencerColorer(RecursiveColorer):
    """Recursive partial colorings with thresholds alpha(m, n_r), then rounding."""

    def __init__(self, sys: SetSystem, params: SpencerParams):
        if sys.n < 1 or sys.m < 1:
            raise PreconditionError("the recursive pipeline needs n >= 1 and m >= 1")
        super().__init__(
            sys,
            delta=params.delta if params.delta is not None else default_delta(sys.m),
            max_rounds=params.max_rounds or default_rounds(sys.n),
            walk_retries=params.walk_retries or default_walk_retries(sys.n),
            seed=params.seed,
            big_c=params.big_c,
            gamma=params.gamma,
        )
        self.params = params
        self.require_feasible = params.require_feasible

    def round_thresholds(self, restricted: ConstraintSet, n_r: int) -> Tuple[np.ndarray, float]:
        alpha = self.params.alpha_rule(self.sys.m, n_r)
        return np.full(restricted.m, alpha), alpha

    def run(self) -> PipelineResult:
        logger.info(f"Recursive coloring: n={self.sys.n}, m={self.sys.m}, delta={self.delta:.4f}, seed={self.seed}")
        x, rounds, free = self.recurse()
        drift = math.fsum(r.alpha * math.sqrt(r.n_r) for r in rounds)
        if self.params.rounding == "sign":
            chi = Coloring(chi=sign_round(x))
            bound = drift + self.sys.n * self.delta
        else:
            rng = make_rng(self.seed, Stream.ROUNDING)
            chi = round_randomized(FractionalColoring(x=np.clip(x, -1.0, 1.0)), self.constraints, self.delta,
                                   self.params.rounding_retries, rng)
            bound = drift + math.sqrt(self.sys.n)
        report = discrepancy(chi, self.sys, bound=bound)
        logger.info(f"Recursive coloring done: discrepancy={report.max_abs:g}, bound={bound:.3f}, rounds={len(rounds)}")
        return PipelineResult(coloring=chi, report=report, rounds=rounds,
                              unfixed_after_rounds=int(free.size), seed=self.seed)


class BeckFialaColorer(RecursiveColorer):
    """Bounded-degree pipeline: thresholds C sqrt(t) / ||v_j|| per round, sign rounding."""

    # the per-round condition sum is reported, not enforced
    require_feasible = False

    def __init__(self, sys: SetSystem, params: BeckFialaParams):
        frequency = int(sys.frequencies().max(initial=0))
        if frequency > params.degree_t:
            raise PreconditionError(f"an element lies in {frequency} sets, more than degree_t={params.degree_t}")
        super().__init__(
            sys,
            delta=params.delta if params.delta is not None else poly_delta(sys.n),
            max_rounds=params.max_rounds or default_rounds(sys.n),
            walk_retries=params.walk_retries or default_walk_retries(sys.n),
            seed=params.seed,
            big_c=params.big_c,
            gamma=params.gamma,
        )
        self.params = params
        self.frequency = frequency

    def round_thresholds(self, restricted: ConstraintSet, n_r: int) -> Tuple[np.ndarray, float]:
        absolute = self.params.big_c_bf * math.sqrt(self.params.degree_t)
        norms = restricted.norms
        thresholds = np.divide(absolute, norms, out=np.zeros_like(norms), where=norms > 0)
        feasibility = check_feasibility(thresholds[norms > 0], n_r)
        logger.debug(f"Bounded-degree round n_r={n_r}: condition sum {feasibility.total:.4g} vs {feasibility.budget:.4g}")
        return thresholds, absolute

    def run(self) -> PipelineResult:
        logger.info(f"Bounded-degree coloring: n={self.sys.n}, m={self.sys.m}, t={self.params.degree_t}, "
                    f"C={self.params.big_c_bf}, seed={self.seed}")
        x, rounds, free = self.recurse()
        chi = Coloring(chi=sign_round(x))
        log_n = max(1, math.ceil(math.log2(self.sys.n))) if self.sys.n > 1 else 1
        bound = 2.0 * self.params.big_c_bf * math.sqrt(self.params.degree_t) * log_n + self.sys.n * self.delta
        report = discrepancy(chi, self.sys, bound=bound)
        logger.info(f"Bounded-degree coloring done: discrepancy={report.max_abs:g}, bound={bound:.3f}")
        return PipelineResult(coloring=chi, report=report, rounds=rounds,
                              unfixed_after_rounds=int(free.size), seed=self.seed)


def spencer_color(sys: SetSystem, params: Optional[SpencerParams] = None) -> Tuple[Coloring, DiscrepancyReport]:
    result = SpencerColorer(sys, params or SpencerParams()).run()
    return result.coloring, result.report


def beck_fiala_color(sys: SetSystem, params: BeckFialaParams) -> Tuple[Coloring, DiscrepancyReport]:
    result = BeckFialaColorer(sys, params).run()
    return result.coloring, result.report


def partial_coloring_corollary(sys: SetSystem, Delta: Sequence[float], seed: int = 0,
                               max_retries: int = 60) -> FractionalColoring:
    """Partial coloring with per-set targets |sum_{i in S} x_i| <= Delta_S + n delta.

    Requires sum_S exp(-Delta_S^2 / (16 |S|)) <= n/16. Coordinates within
    delta = 1/n of +-1 are rounded to their sign before returning.
    """
    Delta = np.asarray(Delta, dtype=np.float64)
    if Delta.shape != (sys.m,):
        raise PreconditionError(f"expected {sys.m} targets, got {Delta.shape}")
    if np.any(Delta < 0):
        raise PreconditionError("targets must be nonnegative")
    constraints = indicator_matrix(sys)
    nonzero = constraints.nonzero
    c = np.divide(Delta, constraints.norms, out=np.zeros_like(Delta), where=nonzero)
    feasibility = check_feasibility(c[nonzero], sys.n)
    if not feasibility.feasible:
        raise PreconditionError(
            f"sum exp(-Delta^2/16|S|) = {feasibility.total:.6g} exceeds n/16 = {feasibility.budget:.6g}"
        )
    delta = poly_delta(sys.n)
    params = make_walk_params(delta, sys.n, int(nonzero.sum()), max_retries=max_retries, seed=seed)
    outcome, used = PartialColorer(constraints.with_thresholds(c), None, params).run()
    x = np.array(outcome.x.x)
    near = np.abs(x) >= 1.0 - delta
    x[near] = np.sign(x[near])
    logger.info(f"Per-set partial coloring: {int(near.sum())}/{sys.n} coordinates rounded after {used} attempt(s)")
    return FractionalColoring(x=x)
