"""Models describing generated test instances."""
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

GeneratorKind = Literal["bernoulli", "k-uniform", "low-degree", "singleton", "matrix-gaussian"]


class GeneratorSpec(BaseModel):
    """Seeded recipe for one instance family."""

    model_config = ConfigDict(frozen=True)

    kind: GeneratorKind = Field(..., description="Instance family")
    n: int = Field(..., ge=1, description="Universe size / dimension")
    m: int = Field(0, ge=0, description="Number of sets or rows; ignored for singleton")
    param: Union[int, float, None] = Field(None, description="p for bernoulli, k for k-uniform, t for low-degree")
    seed: int = Field(0, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def validate_param(self):
        if self.kind == "bernoulli":
            if self.param is None or not 0.0 <= float(self.param) <= 1.0:
                raise ValueError("bernoulli needs param p in [0, 1]")
        elif self.kind == "k-uniform":
            if self.param is None or float(self.param) != int(self.param) or not 1 <= int(self.param) <= self.n:
                raise ValueError(f"k-uniform needs an integer param k in [1, {self.n}]")
        elif self.kind == "low-degree":
            if self.param is None or float(self.param) != int(self.param) or int(self.param) < 1:
                raise ValueError("low-degree needs an integer param t >= 1")
            if self.m < 1:
                raise ValueError("low-degree needs m >= 1")
        return self
