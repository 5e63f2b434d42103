"""Domain types for set systems, constraint vectors and colorings."""
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import settings

NORM_REL_TOL = 1e-12


def _frozen_array(value) -> np.ndarray:
    arr = np.array(value, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


class SetSystem(BaseModel):
    """A universe {0..n-1} and m index sets over it."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Universe size")
    sets: Tuple[Tuple[int, ...], ...] = Field(
        default=(),
        description="Sorted, duplicate-free 0-based index lists, one per set",
    )

    @model_validator(mode="after")
    def validate_sets(self):
        for j, s in enumerate(self.sets):
            for a, b in zip(s, s[1:]):
                if a >= b:
                    raise ValueError(f"set {j} is not strictly increasing: {list(s)}")
            if s and (s[0] < 0 or s[-1] >= self.n):
                raise ValueError(f"set {j} has an index outside [0, {self.n})")
        return self

    @property
    def m(self) -> int:
        return len(self.sets)

    def set_sizes(self) -> np.ndarray:
        return np.array([len(s) for s in self.sets], dtype=np.int64)

    def frequencies(self) -> np.ndarray:
        """Number of sets containing each element."""
        freq = np.zeros(self.n, dtype=np.int64)
        for s in self.sets:
            freq[list(s)] += 1
        return freq


class ConstraintSet(BaseModel):
    """Vectors v_j with cached norms and thresholds c_j.

    Thresholds are dimensionless: the constraint on v_j is
    |<x - x0, v_j>| <= c_j * ||v_j||_2. Zero rows are kept (so indices line up
    with the source sets) but excluded from the walk.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=0, description="Dimension of the ambient space")
    rows: np.ndarray = Field(..., description="m x n matrix of constraint vectors")
    norms: np.ndarray = Field(..., description="Euclidean norm of every row")
    thresholds: np.ndarray = Field(..., description="Nonnegative c_j, in units of ||v_j||")

    @field_validator("rows", mode="before")
    @classmethod
    def coerce_rows(cls, v):
        arr = np.array(v, dtype=np.float64, copy=True)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError(f"rows must be a matrix, got shape {arr.shape}")
        arr.flags.writeable = False
        return arr

    @field_validator("norms", "thresholds", mode="before")
    @classmethod
    def coerce_vector(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_shapes(self):
        m = self.rows.shape[0]
        if m and self.rows.shape[1] != self.n:
            raise ValueError(f"rows have {self.rows.shape[1]} columns, expected n={self.n}")
        if self.norms.shape != (m,) or self.thresholds.shape != (m,):
            raise ValueError("norms and thresholds must have one entry per row")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("rows contain non-finite values")
        if np.any(self.thresholds < 0) or not np.all(np.isfinite(self.thresholds)):
            raise ValueError("thresholds must be finite and nonnegative")
        recomputed = np.linalg.norm(self.rows, axis=1) if m else np.zeros(0)
        if np.any(np.abs(recomputed - self.norms) > NORM_REL_TOL * np.maximum(recomputed, 1.0)):
            raise ValueError("cached norms disagree with the rows")
        return self

    @classmethod
    def from_rows(cls, rows, thresholds=None, n: Optional[int] = None) -> "ConstraintSet":
        arr = np.array(rows, dtype=np.float64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, n or 0)
        dim = arr.shape[1] if n is None else n
        norms = np.linalg.norm(arr, axis=1) if arr.shape[0] else np.zeros(0)
        if thresholds is None:
            thresholds = np.zeros(arr.shape[0])
        return cls(n=dim, rows=arr, norms=norms, thresholds=thresholds)

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def nonzero(self) -> np.ndarray:
        """Mask of rows taking part in the walk."""
        return self.norms > 0

    def with_thresholds(self, thresholds) -> "ConstraintSet":
        c = np.broadcast_to(np.asarray(thresholds, dtype=np.float64), (self.m,))
        return ConstraintSet(n=self.n, rows=self.rows, norms=self.norms, thresholds=c)

    def restrict(self, columns: np.ndarray) -> "ConstraintSet":
        """Rows restricted to the given coordinates; thresholds carried over."""
        return ConstraintSet.from_rows(self.rows[:, columns], self.thresholds, n=len(columns))

    def normalized(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(unit rows, thresholds, original indices) of the nonzero rows."""
        idx = np.flatnonzero(self.nonzero)
        unit = self.rows[idx] / self.norms[idx, None]
        return unit, self.thresholds[idx].copy(), idx


class FractionalColoring(BaseModel):
    """A point x in [-1, 1]^n (up to eps_box)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray = Field(..., description="Fractional coloring")
    eps_box: float = Field(default_factory=lambda: settings.EPS_BOX, ge=0)

    @field_validator("x", mode="before")
    @classmethod
    def coerce_x(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_box(self):
        if not np.all(np.isfinite(self.x)):
            raise ValueError("x contains non-finite values")
        if self.x.size and np.max(np.abs(self.x)) > 1.0 + self.eps_box:
            raise ValueError(f"x leaves the cube: max |x_i| = {np.max(np.abs(self.x))!r}")
        return self

    @classmethod
    def zeros(cls, n: int) -> "FractionalColoring":
        return cls(x=np.zeros(n))

    @property
    def n(self) -> int:
        return self.x.shape[0]


class Coloring(BaseModel):
    """A full coloring chi in {-1, +1}^n."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    chi: np.ndarray = Field(..., description="Signs, one per element")

    @field_validator("chi", mode="before")
    @classmethod
    def coerce_chi(cls, v):
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("chi must be a vector")
        if not np.all(np.abs(arr) == 1.0):
            raise ValueError("every entry of chi must be exactly +1 or -1")
        out = arr.astype(np.int64)
        out.flags.writeable = False
        return out

    @property
    def n(self) -> int:
        return self.chi.shape[0]


class DiscrepancyReport(BaseModel):
    """Per-constraint inner products and the maximum discrepancy."""

    model_config = ConfigDict(frozen=True)

    per_constraint: List[float] = Field(default_factory=list)
    max_abs: float = Field(0.0, ge=0)
    bound: Optional[float] = Field(None, description="Guarantee being checked, if any")
    satisfied: bool = True

    @model_validator(mode="after")
    def validate_max(self):
        expected = max((abs(v) for v in self.per_constraint), default=0.0)
        if self.max_abs != expected:
            raise ValueError(f"max_abs {self.max_abs} != max |per_constraint| {expected}")
        return self

    def to_report(self) -> dict:
        return {
            "max_abs": float(self.max_abs),
            "per_constraint": [float(v) for v in self.per_constraint],
            "bound": None if self.bound is None else float(self.bound),
            "satisfied": bool(self.satisfied),
        }
