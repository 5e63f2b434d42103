"""Models for the Edge-Walk partial coloring."""
import math
from typing import List, Optional, TypedDict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config.settings import settings
from ..core.subspace import OrthoBasis
from .set_systems import FractionalColoring


class WalkParams(BaseModel):
    """Constants of one walk: near-hit tolerance, step size and horizon."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(..., gt=0, lt=0.1, description="Near-hit tolerance")
    gamma: float = Field(..., gt=0, description="Step size")
    big_c: float = Field(default_factory=lambda: settings.BIG_C, ge=1, description="Constant C in the step-size bound")
    k1: float = Field(default_factory=lambda: settings.K1, gt=0, description="Horizon constant, T = k1 / gamma^2")
    t_steps: int = Field(0, ge=0, description="Number of steps T; derived from k1 and gamma when 0")
    max_retries: int = Field(60, ge=1)
    seed: int = 0
    eps_slack: float = Field(default_factory=lambda: settings.EPS_SLACK, ge=0)
    record_trace: bool = False

    @model_validator(mode="before")
    @classmethod
    def fill_t_steps(cls, data):
        if isinstance(data, dict) and not data.get("t_steps"):
            k1 = data.get("k1", settings.K1)
            data = {**data, "t_steps": math.ceil(k1 / data["gamma"] ** 2)}
        return data

    @model_validator(mode="after")
    def validate_horizon(self):
        if self.t_steps * self.gamma ** 2 < self.k1 * (1 - 1e-12):
            raise ValueError(f"t_steps={self.t_steps} is shorter than k1/gamma^2")
        return self


class TracePoint(BaseModel):
    """Walk progress at a basis change."""

    step: int
    dim: int
    n_active_vars: int
    n_active_disc: int


class WalkOutcome(BaseModel):
    """Result of a single walk, with the two partial-coloring conditions evaluated."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: FractionalColoring
    success: bool = Field(..., description="Both partial-coloring conditions hold and the walk stayed in P")
    n_active_vars: int = Field(..., ge=0)
    n_active_disc: int = Field(..., ge=0)
    contained: bool
    steps: int = Field(0, ge=0, description="Steps actually taken")
    norm_sq: float = Field(0.0, ge=0, description="||X_T||^2")
    max_violation: float = Field(0.0, description="Largest containment excess observed")
    seed: int = 0
    trace_summary: Optional[List[TracePoint]] = None

    @model_validator(mode="after")
    def validate_success(self):
        if self.success and (2 * self.n_active_vars < self.x.n or not self.contained):
            raise ValueError("a successful walk must fix half the coordinates and stay contained")
        return self

    def to_report(self) -> dict:
        report = {
            "success": self.success,
            "n_active_vars": self.n_active_vars,
            "n_active_disc": self.n_active_disc,
            "contained": self.contained,
            "steps": self.steps,
            "norm_sq": float(self.norm_sq),
            "max_violation": float(self.max_violation),
            "seed": self.seed,
            "x": [float(v) for v in self.x.x],
        }
        if self.trace_summary is not None:
            report["trace_summary"] = [p.model_dump() for p in self.trace_summary]
        return report


class WalkState(TypedDict):
    """Evolving state of a walk; owned by exactly one walker."""

    x: np.ndarray
    step: int
    active_vars: np.ndarray  # bool mask over coordinates (C^var)
    active_disc: np.ndarray  # bool mask over walk rows (C^disc)
    basis: OrthoBasis  # orthonormal basis of O_t
    cached_ips: np.ndarray  # <X_t - x0, v_j>, refreshed at checks, pinned once active
    next_check: np.ndarray  # step at which each inactive row is re-checked
    max_violation: float  # largest excess over |x_i| <= 1 or |<x - x0, v_j>| <= c_j seen so far
