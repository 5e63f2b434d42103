"""Validated command-line configuration."""
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .instances import GeneratorKind, GeneratorSpec

Command = Literal["gen", "partial", "spencer", "beckfiala", "disc", "brute", "verify", "bench"]


class RunConfig(BaseModel):
    """One CLI invocation."""

    command: Command
    input: Optional[Path] = Field(None, description="Instance file (text set system or CSV matrix)")
    output: Optional[Path] = Field(None, description="Report / instance destination; stdout when unset")
    coloring: Optional[Path] = Field(None, description="Coloring (disc) or fractional point (verify)")
    seed: int = Field(0, ge=0, lt=1 << 64)
    runs: int = Field(1, ge=1)

    delta: Optional[float] = Field(None, gt=0, lt=0.1)
    gamma: Optional[float] = Field(None, gt=0)
    big_c: Optional[float] = Field(None, ge=1)
    k1: Optional[float] = Field(None, gt=0)
    retries: Optional[int] = Field(None, ge=1)
    eps_slack: Optional[float] = Field(None, ge=0, description="--tol")
    threshold: Optional[float] = Field(None, ge=0, description="Uniform c_j for partial / bench")
    degree: Optional[int] = Field(None, ge=1, description="Frequency bound t for beckfiala")
    rounding: Literal["randomized", "sign"] = "randomized"
    alpha: Literal["default", "sharp"] = "default"
    target: Literal["partial", "spencer", "beckfiala"] = "partial"
    trace: bool = False

    gen: Optional[GeneratorKind] = None
    n: Optional[int] = Field(None, ge=1)
    m: Optional[int] = Field(None, ge=0)
    p: Optional[float] = Field(None, ge=0, le=1)
    k: Optional[int] = Field(None, ge=1)
    t: Optional[int] = Field(None, ge=1)
    gen_seed: Optional[int] = Field(None, ge=0, lt=1 << 64, description="Instance seed; defaults to --seed")
    spec: Optional[Path] = Field(None, description="GeneratorSpec as a JSON file")

    @model_validator(mode="after")
    def validate_source(self):
        generated = self.gen is not None or self.spec is not None
        if self.command == "gen" and not generated:
            raise ValueError("gen needs --gen KIND or --spec FILE")
        if self.command != "gen" and self.input is None and not generated:
            raise ValueError(f"{self.command} needs --input or --gen")
        if self.gen is not None and self.n is None:
            raise ValueError("--gen needs --n")
        if self.command == "disc" and self.coloring is None:
            raise ValueError("disc needs --coloring")
        if self.command == "verify" and self.coloring is None:
            raise ValueError("verify needs --coloring with the point to check")
        return self

    def generator_spec(self) -> GeneratorSpec:
        if self.spec is not None:
            return GeneratorSpec.model_validate_json(self.spec.read_text(encoding="utf-8"))
        param = {"bernoulli": self.p, "k-uniform": self.k, "low-degree": self.t or self.degree}.get(self.gen)
        return GeneratorSpec(
            kind=self.gen,
            n=self.n,
            m=self.m if self.m is not None else self.n,
            param=param,
            seed=self.gen_seed if self.gen_seed is not None else self.seed,
        )
