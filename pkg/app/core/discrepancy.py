"""Set-system/vector conversion, discrepancy evaluation and the feasibility budget."""
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..models.set_systems import Coloring, ConstraintSet, DiscrepancyReport, SetSystem
from .errors import DimensionError, PreconditionError

# relative slack on the budget comparison; sums that equal n/16 analytically
# must not be rejected over one ulp
FEASIBILITY_RTOL = 1e-12
BOUND_ATOL = 1e-9


class FeasibilityResult(BaseModel):
    """Outcome of the sum_j exp(-c_j^2/16) <= n/16 test."""

    total: float = Field(..., description="sum_j exp(-c_j^2/16)")
    budget: float = Field(..., description="n/16")
    feasible: bool

    @property
    def slack(self) -> float:
        return self.budget - self.total


def indicator_matrix(sys: SetSystem) -> ConstraintSet:
    """Indicator rows of the sets; thresholds start at zero."""
    rows = np.zeros((sys.m, sys.n))
    for j, s in enumerate(sys.sets):
        rows[j, list(s)] = 1.0
    norms = np.sqrt(sys.set_sizes().astype(np.float64))
    return ConstraintSet(n=sys.n, rows=rows, norms=norms, thresholds=np.zeros(sys.m))


def _report(per_constraint: Sequence[float], bound: Optional[float]) -> DiscrepancyReport:
    values = [float(v) for v in per_constraint]
    max_abs = max((abs(v) for v in values), default=0.0)
    satisfied = True if bound is None else max_abs <= bound + BOUND_ATOL
    return DiscrepancyReport(per_constraint=values, max_abs=max_abs, bound=bound, satisfied=satisfied)


def discrepancy(chi: Coloring, sys: SetSystem, bound: Optional[float] = None) -> DiscrepancyReport:
    """Set sums of a coloring; max_abs is the discrepancy chi(S)."""
    if chi.n != sys.n:
        raise DimensionError(f"coloring has length {chi.n}, set system has n={sys.n}")
    signs = chi.chi
    sums = [int(signs[list(s)].sum()) if s else 0 for s in sys.sets]
    return _report(sums, bound)


def inner_products(x: np.ndarray, constraints: ConstraintSet, x0: Optional[np.ndarray] = None,
                   bound: Optional[float] = None) -> DiscrepancyReport:
    """<x - x0, v_j> for every row (x0 defaults to the origin)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (constraints.n,):
        raise DimensionError(f"vector has shape {x.shape}, constraints have n={constraints.n}")
    diff = x if x0 is None else x - np.asarray(x0, dtype=np.float64)
    values = constraints.rows @ diff if constraints.m else np.zeros(0)
    return _report(values, bound)


def check_feasibility(c, n: int) -> FeasibilityResult:
    """Evaluate sum_j exp(-c_j^2/16) against n/16."""
    c = np.asarray(c, dtype=np.float64).reshape(-1)
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise PreconditionError("thresholds must be finite and nonnegative")
    total = math.fsum(np.exp(-(c ** 2) / 16.0).tolist())
    budget = n / 16.0
    return FeasibilityResult(total=total, budget=budget, feasible=total <= budget * (1.0 + FEASIBILITY_RTOL))
