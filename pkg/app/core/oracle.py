"""Brute-force ground truth and independent verification on small instances."""
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np

from ..config.logging_config import logger
from ..config.settings import settings
from ..models.oracle import OracleResult, PartialCheck
from ..models.set_systems import Coloring, ConstraintSet, FractionalColoring, SetSystem
from .errors import DimensionError, InstanceTooLarge

# high free coordinates fixed per block; blocks are enumerated independently
PREFIX_BITS = 4

_Best = Tuple[int, Tuple[int, ...]]


def _enumerate_block(columns: np.ndarray, start: np.ndarray, low: int) -> _Best:
    """Gray-code walk over coordinates 1..low with everything else fixed as in `start`.

    Each flip updates the set sums in O(m). Ties keep the lexicographically
    smallest coloring.
    """
    chi = start.copy()
    sums = columns @ chi
    best = (int(np.max(np.abs(sums), initial=0)), tuple(chi.tolist()))
    for k in range(1, 1 << low):
        coord = 1 + ((k & -k).bit_length() - 1)
        chi[coord] = -chi[coord]
        sums += 2 * chi[coord] * columns[:, coord]
        value = int(np.max(np.abs(sums), initial=0))
        if value < best[0]:
            best = (value, tuple(chi.tolist()))
        elif value == best[0]:
            candidate = tuple(chi.tolist())
            if candidate < best[1]:
                best = (value, candidate)
    return best


def brute_force_disc(sys: SetSystem, workers: Optional[int] = None) -> OracleResult:
    """Exact minimum discrepancy over all 2^n colorings.

    chi and -chi have the same discrepancy, so chi_0 = -1 is fixed and 2^(n-1)
    colorings are enumerated; the lexicographically smallest optimum always has
    chi_0 = -1.
    """
    n = sys.n
    if n > settings.BRUTE_FORCE_MAX_N:
        raise InstanceTooLarge(f"brute force is capped at n={settings.BRUTE_FORCE_MAX_N}, got n={n}")
    columns = np.zeros((sys.m, n), dtype=np.int64)
    for j, s in enumerate(sys.sets):
        columns[j, list(s)] = 1

    free = n - 1
    prefix = min(PREFIX_BITS, free)
    low = free - prefix
    starts = []
    for p in range(1 << prefix):
        start = -np.ones(n, dtype=np.int64)
        for b in range(prefix):
            if p >> b & 1:
                start[1 + low + b] = 1
        starts.append(start)

    workers = workers or settings.THREADS
    logger.debug(f"Brute force: n={n}, m={sys.m}, {len(starts)} blocks of 2^{low}")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda s: _enumerate_block(columns, s, low), starts))
    value, chi = min(results)
    return OracleResult(opt_disc=value, argmin=Coloring(chi=list(chi)), n_enumerated=1 << n)


def verify_partial(x, x0, constraints: ConstraintSet, delta: float,
                   eps_slack: Optional[float] = None, eps_box: Optional[float] = None) -> PartialCheck:
    """Check the partial-coloring conditions from scratch (no walk caches)."""
    eps_slack = settings.EPS_SLACK if eps_slack is None else eps_slack
    eps_box = settings.EPS_BOX if eps_box is None else eps_box
    x = np.asarray(x.x if isinstance(x, FractionalColoring) else x, dtype=np.float64)
    x0 = np.asarray(x0.x if isinstance(x0, FractionalColoring) else x0, dtype=np.float64)
    if x.shape != (constraints.n,) or x0.shape != (constraints.n,):
        raise DimensionError(f"x and x0 must have length {constraints.n}")

    nonzero = np.flatnonzero(constraints.nonzero)
    scaled = np.einsum("ij,j->i", constraints.rows[nonzero], x - x0) / constraints.norms[nonzero]
    excess = np.abs(scaled) - constraints.thresholds[nonzero]
    violating = [int(j) for j in nonzero[excess > eps_slack]]

    n_near = int(np.sum(np.abs(x) >= 1.0 - delta))
    return PartialCheck(
        thresholds_ok=not violating,
        near_ok=2 * n_near >= constraints.n,
        in_box=bool(np.all(np.abs(x) <= 1.0 + eps_box)),
        n_near=n_near,
        violating=violating,
        max_excess=float(np.max(excess, initial=-np.inf)) if nonzero.size else 0.0,
    )
