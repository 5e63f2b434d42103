"""Models for multi-run benchmark statistics."""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class RunRecord(BaseModel):
    """One benchmark run."""

    run: int = Field(..., ge=0, description="Run index; reports are sorted by it")
    seed: int
    success: bool
    contained: bool
    n_active_vars: Optional[int] = None
    n_active_disc: Optional[int] = None
    norm_sq: Optional[float] = None
    discrepancy: Optional[float] = Field(None, description="max_j |<x, v_j>| of the run's output; None if the run failed")
    steps: Optional[int] = None


class BenchReport(BaseModel):
    """Aggregate statistics over independent seeded runs."""

    target: Literal["partial", "spencer", "beckfiala"]
    n: int
    m: int
    runs: int = Field(..., ge=1)
    seed: int
    success_rate: float = Field(..., ge=0, le=1)
    containment_rate: float = Field(..., ge=0, le=1)
    mean_n_active_vars: Optional[float] = None
    mean_n_active_disc: Optional[float] = None
    mean_norm_sq: Optional[float] = None
    discrepancy_quantiles: Dict[str, float] = Field(default_factory=dict)
    baseline_quantiles: Dict[str, float] = Field(default_factory=dict, description="Uniform random colorings")
    per_run: List[RunRecord] = Field(default_factory=list)

    def to_report(self) -> dict:
        return self.model_dump()
