"""Result models for the exhaustive oracle and the partial-coloring verifier."""
from typing import List

from pydantic import BaseModel, ConfigDict, Field

from .set_systems import Coloring


class OracleResult(BaseModel):
    """Exact minimum discrepancy of a small set system."""

    model_config = ConfigDict(frozen=True)

    opt_disc: int = Field(..., ge=0, description="min over colorings of max_S |chi(S)|")
    argmin: Coloring = Field(..., description="Lexicographically smallest optimal coloring (-1 < +1)")
    n_enumerated: int = Field(..., description="Colorings covered, 2^n (half enumerated by symmetry)")

    def to_report(self) -> dict:
        return {
            "opt_disc": self.opt_disc,
            "argmin": [int(v) for v in self.argmin.chi],
            "n_enumerated": self.n_enumerated,
        }


class PartialCheck(BaseModel):
    """Independent evaluation of the two partial-coloring conditions."""

    model_config = ConfigDict(frozen=True)

    thresholds_ok: bool = Field(..., description="|<x - x0, v_j>| <= c_j ||v_j|| for every j (condition i)")
    near_ok: bool = Field(..., description="At least n/2 coordinates with |x_i| >= 1 - delta (condition ii)")
    in_box: bool = Field(..., description="max |x_i| <= 1 + eps_box")
    n_near: int = Field(..., ge=0)
    violating: List[int] = Field(default_factory=list, description="Indices of violated thresholds")
    max_excess: float = Field(0.0, description="Largest |<x - x0, v_j>| / ||v_j|| - c_j")

    @property
    def holds(self) -> bool:
        return self.thresholds_ok and self.near_ok and self.in_box

    def to_report(self) -> dict:
        return {**self.model_dump(), "holds": self.holds}
