#File: app/workflows/edge_walk.py
#Description: Edge-Walk partial coloring: the constrained Gaussian walk with
#active-set tracking, plus the boosted (retrying) partial coloring.

import math
from typing import List, Optional, Tuple

import numpy as np

from ..config.logging_config import logger
from ..config.settings import settings
from ..core.discrepancy import check_feasibility
from ..core.errors import DimensionError, NumericFailure, PreconditionError, RetriesExhausted
from ..core.rng import Stream, derive_seed, make_rng
from ..core.subspace import OrthoBasis, complement_basis, downdate, sample_gaussian_block
from ..models.set_systems import ConstraintSet, FractionalColoring
from ..models.walk import TracePoint, WalkOutcome, WalkParams, WalkState

# large sentinel for "never re-check" (active rows)
_NEVER = np.iinfo(np.int64).max // 4


def derive_gamma(delta: float, n: int, m: int, big_c: Optional[float] = None, iterations: int = 3) -> float:
    """Step size gamma = delta / sqrt(C ln(2mn/gamma)) by fixed-point iteration from gamma = delta."""
    if not 0 < delta < 0.1:
        raise PreconditionError(f"delta must lie in (0, 0.1), got {delta}")
    big_c = settings.BIG_C if big_c is None else big_c
    m = max(m, 1)
    n = max(n, 1)
    gamma = delta
    for _ in range(iterations):
        gamma = delta / math.sqrt(big_c * math.log(2.0 * m * n / gamma))
    return gamma


def make_walk_params(delta: float, n: int, m: int, gamma: Optional[float] = None, **kwargs) -> WalkParams:
    """WalkParams with gamma derived from (delta, n, m, big_c) unless given."""
    if gamma is None:
        gamma = derive_gamma(delta, n, m, kwargs.get("big_c"))
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return WalkParams(delta=delta, gamma=gamma, **kwargs)


def active_sets(x, x0, constraints: ConstraintSet, delta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Indices of nearly hit variable and discrepancy constraints at x.

    C^var = {i : |x_i| >= 1 - delta}, C^disc = {j : |<x - x0, v_j>| >= c_j - delta}
    on unit-normalized rows; zero rows never appear in C^disc.
    """
    x = np.asarray(x, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    unit, c, idx = constraints.normalized()
    var = np.flatnonzero(np.abs(x) >= 1.0 - delta)
    if idx.size == 0:
        return var, idx
    ips = unit @ (x - x0)
    disc = idx[np.abs(ips) >= c - delta]
    return var, disc


def _check_interval(margin: np.ndarray, gamma: float) -> np.ndarray:
    """Steps until the next re-check: max(1, floor((margin / (8 gamma))^2))."""
    ratio = np.maximum(margin, 0.0) / (8.0 * gamma)
    return np.maximum(1, np.floor(np.minimum(ratio ** 2, 1e15))).astype(np.int64)


class EdgeWalker:
    """One Edge-Walk over the polytope {|x_i| <= 1, |<x - x0, v_j>| <= c_j}.

    Rows are normalized on construction, so thresholds are in units of
    ||v_j||. Steps that share a basis are sampled in blocks; a block is cut at
    the first step that nearly hits a new variable constraint and never spans a
    scheduled discrepancy check.
    """

    def __init__(self, constraints: ConstraintSet, x0: FractionalColoring, params: WalkParams):
        if x0.n != constraints.n:
            raise DimensionError(f"x0 has length {x0.n}, constraints have n={constraints.n}")
        self.params = params
        self.n = constraints.n
        self.unit, self.c, self.row_index = constraints.normalized()
        self.x0 = np.array(x0.x, dtype=np.float64)
        self.block_steps = max(1, settings.WALK_BLOCK_STEPS)

    # -- state -----------------------------------------------------------------

    def _initial_state(self) -> WalkState:
        delta = self.params.delta
        active_vars = np.abs(self.x0) >= 1.0 - delta
        active_disc = self.c <= delta  # |<x0 - x0, v>| = 0 >= c - delta
        constraint_rows = [np.eye(self.n)[active_vars], self.unit[active_disc]]
        if active_vars.any() or active_disc.any():
            basis = complement_basis(np.vstack(constraint_rows), self.n)
        else:
            basis = OrthoBasis.full(self.n)
        cached_ips = np.zeros(self.unit.shape[0])
        next_check = np.where(
            active_disc, _NEVER, _check_interval(self.c - delta, self.params.gamma)
        ).astype(np.int64)
        return WalkState(
            x=self.x0.copy(),
            step=0,
            active_vars=active_vars,
            active_disc=active_disc,
            basis=basis,
            cached_ips=cached_ips,
            next_check=next_check,
            max_violation=max(0.0, float(np.max(np.abs(self.x0), initial=0.0)) - 1.0),
        )

    def _refresh(self, state: WalkState, cut_by_var: bool) -> bool:
        """Update the active sets at the current point; returns True if the basis changed."""
        delta = self.params.delta
        x = state["x"]
        step = state["step"]
        new_vars = (~state["active_vars"]) & (np.abs(x) >= 1.0 - delta)

        inactive = ~state["active_disc"]
        due = inactive & (state["next_check"] <= step)
        new_disc = self._check_rows(state, due)

        if not (cut_by_var or new_vars.any() or new_disc.any()):
            return False

        # the basis is about to change: re-check every remaining row
        new_disc |= self._check_rows(state, inactive & ~due)

        basis = state["basis"]
        for i in np.flatnonzero(new_vars):
            e_i = np.zeros(self.n)
            e_i[i] = 1.0
            basis = downdate(basis, e_i)
        for j in np.flatnonzero(new_disc):
            basis = downdate(basis, self.unit[j])
        state["active_vars"] = state["active_vars"] | new_vars
        state["active_disc"] = state["active_disc"] | new_disc
        state["next_check"][new_disc] = _NEVER
        state["basis"] = basis
        return True

    def _check_rows(self, state: WalkState, rows: np.ndarray) -> np.ndarray:
        """Evaluate the rows in the mask; returns the mask of newly hit rows."""
        hit = np.zeros(rows.shape[0], dtype=bool)
        idx = np.flatnonzero(rows)
        if idx.size == 0:
            return hit
        ips = self.unit[idx] @ (state["x"] - self.x0)
        state["cached_ips"][idx] = ips
        margin = (self.c[idx] - self.params.delta) - np.abs(ips)
        state["max_violation"] = max(state["max_violation"], float(np.max(np.abs(ips) - self.c[idx])))
        hit[idx] = margin <= 0.0
        state["next_check"][idx] = np.where(
            margin <= 0.0, _NEVER, state["step"] + _check_interval(margin, self.params.gamma)
        )
        return hit

    # -- walk ------------------------------------------------------------------

    def run(self, rng: np.random.Generator) -> WalkOutcome:
        params = self.params
        state = self._initial_state()
        threshold = 1.0 - params.delta
        trace: Optional[List[TracePoint]] = [] if params.record_trace else None
        self._record(trace, state)

        while state["step"] < params.t_steps and state["basis"].d > 0:
            step = state["step"]
            inactive = ~state["active_disc"]
            horizon = int(state["next_check"][inactive].min()) - step if inactive.any() else self.block_steps
            k = max(1, min(self.block_steps, params.t_steps - step, horizon))

            increments = sample_gaussian_block(state["basis"], rng, k)
            increments[:, state["active_vars"]] = 0.0
            path = state["x"] + params.gamma * np.cumsum(increments, axis=0)
            if not np.all(np.isfinite(path)):
                bad = int(np.argmin(np.all(np.isfinite(path), axis=1)))
                logger.error(f"Non-finite walk state at step {step + bad + 1}")
                raise NumericFailure("walk state became non-finite", step=step + bad + 1)

            free = ~state["active_vars"]
            hits = np.any(np.abs(path[:, free]) >= threshold, axis=1)
            cut = bool(hits.any())
            accepted = int(np.argmax(hits)) + 1 if cut else k
            state["max_violation"] = max(state["max_violation"], float(np.max(np.abs(path[:accepted]))) - 1.0)

            previous = self._snapshot(state) if settings.CHECK_INVARIANTS else None
            state["x"] = path[accepted - 1].copy()
            state["step"] = step + accepted
            if self._refresh(state, cut):
                self._record(trace, state)
            if previous is not None:
                self._assert_invariants(previous, state)

        return self._finish(state, trace)

    def _finish(self, state: WalkState, trace) -> WalkOutcome:
        """Full re-check pass over every constraint; evaluates the two conditions."""
        params = self.params
        x = state["x"]
        ips = self.unit @ (x - self.x0) if self.unit.shape[0] else np.zeros(0)
        if settings.CHECK_INVARIANTS and state["active_disc"].any():
            drift = np.abs(ips - state["cached_ips"])[state["active_disc"]]
            assert np.max(drift) <= 1e-6 * (1.0 + self.n), "active row moved after activation"
        slab_excess = float(np.max(np.abs(ips) - self.c, initial=-np.inf))
        max_violation = max(state["max_violation"], slab_excess)
        contained = max_violation <= params.eps_slack

        near = np.abs(x) >= 1.0 - params.delta
        n_active_vars = int(np.count_nonzero(near | state["active_vars"]))
        n_active_disc = int(np.count_nonzero(state["active_disc"] | (np.abs(ips) >= self.c - params.delta)))
        within = slab_excess <= params.eps_slack
        success = bool(within and contained and 2 * n_active_vars >= self.n)

        eps_box = max(settings.EPS_BOX, max_violation)
        outcome = WalkOutcome(
            x=FractionalColoring(x=x, eps_box=eps_box),
            success=success,
            n_active_vars=n_active_vars,
            n_active_disc=n_active_disc,
            contained=contained,
            steps=state["step"],
            norm_sq=float(x @ x),
            max_violation=max(0.0, max_violation),
            seed=params.seed,
            trace_summary=trace,
        )
        logger.debug(
            f"Walk finished: steps={outcome.steps}, vars={n_active_vars}/{self.n}, "
            f"disc={n_active_disc}, contained={contained}, success={success}"
        )
        return outcome

    # -- bookkeeping -------------------------------------------------------------

    @staticmethod
    def _record(trace: Optional[List[TracePoint]], state: WalkState) -> None:
        if trace is None:
            return
        trace.append(TracePoint(
            step=state["step"],
            dim=state["basis"].d,
            n_active_vars=int(state["active_vars"].sum()),
            n_active_disc=int(state["active_disc"].sum()),
        ))

    @staticmethod
    def _snapshot(state: WalkState) -> dict:
        return {
            "active_vars": state["active_vars"].copy(),
            "active_disc": state["active_disc"].copy(),
            "x": state["x"].copy(),
            "cached_ips": state["cached_ips"].copy(),
        }

    def _assert_invariants(self, previous: dict, state: WalkState) -> None:
        assert np.all(state["active_vars"][previous["active_vars"]]), "variable active set shrank"
        assert np.all(state["active_disc"][previous["active_disc"]]), "discrepancy active set shrank"
        frozen = previous["active_vars"]
        assert np.array_equal(state["x"][frozen], previous["x"][frozen]), "frozen coordinate moved"
        pinned = previous["active_disc"]
        assert np.array_equal(state["cached_ips"][pinned], previous["cached_ips"][pinned]), "pinned inner product moved"
        basis = state["basis"].vectors
        if basis.shape[0]:
            assert np.max(np.abs(basis[:, state["active_vars"]]), initial=0.0) <= 1e-8, "basis not orthogonal to frozen axes"
            if state["active_disc"].any():
                assert np.max(np.abs(basis @ self.unit[state["active_disc"]].T)) <= 1e-8, "basis not orthogonal to active rows"


def edge_walk(constraints: ConstraintSet, x0: FractionalColoring, params: WalkParams,
              rng: Optional[np.random.Generator] = None) -> WalkOutcome:
    """Run one walk; the rng defaults to the WALK stream of params.seed."""
    if rng is None:
        rng = make_rng(params.seed, Stream.WALK)
    return EdgeWalker(constraints, x0, params).run(rng)


class PartialColorer:
    """Boosts the walk by independent retries until one succeeds."""

    def __init__(self, constraints: ConstraintSet, x0: Optional[FractionalColoring], params: WalkParams,
                 require_feasible: bool = True):
        self.constraints = constraints
        self.x0 = x0 if x0 is not None else FractionalColoring.zeros(constraints.n)
        self.params = params
        self.feasibility = check_feasibility(constraints.thresholds[constraints.nonzero], constraints.n)
        if not self.feasibility.feasible:
            msg = (f"Feasibility condition fails: sum exp(-c^2/16) = {self.feasibility.total:.6g} "
                   f"> n/16 = {self.feasibility.budget:.6g}")
            if require_feasible:
                logger.error(msg)
                raise PreconditionError(msg)
            logger.warning(f"{msg}; running the walk anyway")

    def run(self) -> Tuple[WalkOutcome, int]:
        """Returns the first successful outcome and the number of attempts used."""
        walker = EdgeWalker(self.constraints, self.x0, self.params)
        best: Optional[WalkOutcome] = None
        for attempt in range(self.params.max_retries):
            seed = derive_seed(self.params.seed, attempt)
            outcome = walker.run(make_rng(seed, Stream.WALK))
            if outcome.success:
                logger.debug(f"Partial coloring succeeded on attempt {attempt + 1}")
                return outcome, attempt + 1
            if best is None or (outcome.contained, outcome.n_active_vars) > (best.contained, best.n_active_vars):
                best = outcome
        logger.error(f"Partial coloring failed after {self.params.max_retries} attempts")
        raise RetriesExhausted(f"no successful walk in {self.params.max_retries} attempts", best=best)


def partial_color(constraints: ConstraintSet, x0: Optional[FractionalColoring], delta: float,
                  max_retries: int = 60, seed: int = 0, **overrides) -> FractionalColoring:
    """Point x with |<x - x0, v_j>| <= c_j ||v_j|| and at least n/2 coordinates within delta of +-1."""
    m = int(np.count_nonzero(constraints.nonzero))
    params = make_walk_params(delta, constraints.n, m, max_retries=max_retries, seed=seed, **overrides)
    outcome, _ = PartialColorer(constraints, x0, params).run()
    return outcome.x
