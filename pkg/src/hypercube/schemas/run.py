# src/hypercube/schemas/run.py
"""Serializable run descriptions; every CLI invocation is one RunConfig."""

import math
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from hypercube.schemas.verification import SCHEMA_VERSION

Command = Literal["admissible", "boundary", "verify", "search", "multiplier", "certify"]
Symbol = Literal["geometric", "exp", "laplacian", "identity", "delta"]


class RunConfig(BaseModel):
    """Command id plus its parameters and the global overrides.

    Re-running a stored config reproduces its report up to timing fields.
    """

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    command: Command
    params: dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = Field(None, ge=0)
    tolerance: Optional[float] = Field(None, ge=0)
    threads: Optional[int] = Field(None, ge=1)
    out: Optional[str] = None


class AdmissibleParams(BaseModel):
    p: float = Field(ge=1)
    q: Optional[float] = None
    z: tuple[float, float]


class BoundaryParams(BaseModel):
    p: float = Field(gt=1)
    q: Optional[float] = None
    count: int = Field(256, ge=1)
    t_min: float = 0.0
    t_max: float = math.pi

    @field_validator("t_max")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("t_max must be finite")
        return v


class VerifyParams(BaseModel):
    inequality: str
    fixed: dict[str, float] = Field(default_factory=dict)
    grid: Optional[int] = Field(None, ge=1, description="points on every gridded axis")
    lmax: Optional[int] = Field(None, ge=2, description="upper end of an integer ell axis")
    refine: bool = True


class SearchParams(BaseModel):
    p: float = Field(ge=1)
    q: Optional[float] = None
    z: tuple[float, float]
    n: int = Field(1, ge=1)
    restarts: int = Field(256, ge=1)
    steps: int = Field(200, ge=1)


class MultiplierParams(BaseModel):
    """A problem file, or an inline problem built from a named symbol."""

    problem: Optional[str] = None
    p: Optional[float] = None
    q: Optional[float] = None
    d: Optional[int] = Field(None, ge=0)
    symbol: Symbol = "geometric"
    r: float = 0.5
    M: Optional[int] = None
    domain: Literal["complex", "real"] = "complex"
    n: int = Field(5, ge=1)
    trials: int = Field(200, ge=1)
