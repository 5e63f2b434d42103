"""Parameters and reports of the full-coloring pipelines."""
import math
from typing import Callable, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .set_systems import Coloring, DiscrepancyReport


def default_alpha(m: int, n_r: int) -> float:
    """4 sqrt(max(0, ln(32 m / n_r))); keeps m * exp(-alpha^2/16) <= n_r / 32."""
    return 4.0 * math.sqrt(max(0.0, math.log(32.0 * m / n_r)))


def sharp_alpha(m: int, n_r: int) -> float:
    """sqrt(2 ln(8 m / n_r)): about n_r / 8 unit-variance slabs expected to bind.

    Fails the feasibility condition whenever m is comparable to n_r, so it is
    only usable with feasibility treated as advisory.
    """
    return math.sqrt(max(0.0, 2.0 * math.log(8.0 * m / n_r)))


def default_delta(m: int) -> float:
    """1 / (8 ln m), or 1/64 when m < e^2 (where the formula is undefined or too large)."""
    if m < math.e ** 2:
        return 1.0 / 64.0
    return 1.0 / (8.0 * math.log(m))


def poly_delta(n: int) -> float:
    """delta = 1/n, capped at 1/16 for tiny universes so that delta < 0.1."""
    return min(1.0 / n, 1.0 / 16.0)


def default_rounds(n: int) -> int:
    return 2 * max(1, math.ceil(math.log2(n))) if n > 1 else 1


def default_walk_retries(n: int) -> int:
    return 8 * max(1, math.ceil(math.log2(n))) if n > 1 else 8


def beck_fiala_series(big_c: float, terms: int = 64) -> float:
    """sum_r 2^-r exp(-C^2 2^(r+1) / 16)."""
    return math.fsum(2.0 ** -r * math.exp(-big_c ** 2 * 2.0 ** (r + 1) / 16.0) for r in range(terms))


class SpencerParams(BaseModel):
    """Parameters of the recursive pipeline for general set systems."""

    model_config = ConfigDict(frozen=True)

    delta: Optional[float] = Field(None, gt=0, lt=0.1, description="Near-hit tolerance; default 1/(8 ln m)")
    alpha_rule: Callable[[int, int], float] = Field(default=default_alpha, exclude=True)
    require_feasible: bool = Field(True, description="Reject rounds that fail the feasibility condition; False only logs them")
    max_rounds: Optional[int] = Field(None, ge=1, description="Default 2 ceil(log2 n)")
    rounding_retries: int = Field(64, ge=1)
    walk_retries: Optional[int] = Field(None, ge=1, description="Per-round boosting; default 8 ceil(log2 n)")
    rounding: Literal["randomized", "sign"] = "randomized"
    big_c: Optional[float] = Field(None, ge=1)
    gamma: Optional[float] = Field(None, gt=0)
    seed: int = 0


class BeckFialaParams(BaseModel):
    """Parameters of the bounded-degree pipeline."""

    model_config = ConfigDict(frozen=True)

    degree_t: int = Field(..., ge=1, description="Maximum number of sets containing an element")
    big_c_bf: float = Field(5.0, gt=0, description="Threshold constant C in c_j = C sqrt(t) / ||v_j||")
    delta: Optional[float] = Field(None, gt=0, lt=0.1, description="Default 1/n")
    max_rounds: Optional[int] = Field(None, ge=1)
    walk_retries: Optional[int] = Field(None, ge=1)
    big_c: Optional[float] = Field(None, ge=1)
    gamma: Optional[float] = Field(None, gt=0)
    seed: int = 0

    @field_validator("big_c_bf")
    @classmethod
    def validate_series(cls, v: float):
        total = beck_fiala_series(v)
        if total >= 1.0 / 16.0:
            raise ValueError(f"C={v} gives sum_r 2^-r exp(-C^2 2^(r+1)/16) = {total:.4f} >= 1/16")
        return v


class RoundRecord(BaseModel):
    """One round of the recursion."""

    n_r: int = Field(..., ge=0, description="Unfixed coordinates entering the round")
    alpha: float = Field(..., ge=0, description="Threshold used in the round")
    retries_used: int = Field(..., ge=0)


class PipelineResult(BaseModel):
    """Full coloring with its discrepancy report and round history."""

    model_config = ConfigDict(frozen=True)

    coloring: Coloring
    report: DiscrepancyReport
    rounds: List[RoundRecord] = Field(default_factory=list)
    unfixed_after_rounds: int = Field(0, ge=0)
    seed: int = 0

    @model_validator(mode="after")
    def validate_bound(self):
        if self.report.bound is None:
            raise ValueError("pipeline reports always carry a bound")
        return self

    def to_report(self) -> dict:
        return {
            "chi": [int(v) for v in self.coloring.chi],
            "discrepancy": float(self.report.max_abs),
            "bound": float(self.report.bound),
            "satisfied": self.report.satisfied,
            "rounds": [r.model_dump() for r in self.rounds],
            "seed": self.seed,
        }
