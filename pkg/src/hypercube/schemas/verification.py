# src/hypercube/schemas/verification.py
"""Inequality-scan schemas (Pydantic models)."""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = 1


class ReducedPoint(BaseModel):
    """A point (s, c, a, t, y) of the reduced two-point inequality."""

    model_config = ConfigDict(frozen=True)

    s: float = Field(gt=1)
    c: float = Field(ge=1)
    a: float
    t: float
    y: float = Field(ge=0)

    @property
    def p(self) -> float:
        return 2.0 * self.s

    @property
    def C(self) -> float:
        return self.c * self.c

    def in_reduced_domain(self, tol: float = 1e-12) -> bool:
        return self.a >= -tol and self.t >= -tol and self.a + self.t <= math.pi / 2 + tol

    def in_small_radius(self, tol: float = 1e-12) -> bool:
        return self.c * self.y <= 1.0 + tol


class GridAxis(BaseModel):
    name: str = Field(min_length=1)
    min: float
    max: float
    count: int = Field(ge=0)
    integer: bool = False

    @model_validator(mode="after")
    def _check_range(self) -> "GridAxis":
        if self.max < self.min:
            raise ValueError(f"axis {self.name}: max {self.max} below min {self.min}")
        return self


class GridSpec(BaseModel):
    axes: list[GridAxis]
    fixed: dict[str, float] = {}
    refine: bool = True
    refine_width: float = Field(1e-4, gt=0)

    @model_validator(mode="after")
    def _check_names(self) -> "GridSpec":
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axis names in {names}")
        clash = set(names) & set(self.fixed)
        if clash:
            raise ValueError(f"parameters both gridded and fixed: {sorted(clash)}")
        return self


class VerificationReport(BaseModel):
    """Outcome of a grid scan; ``pass`` holds iff worst_margin >= -tolerance."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    inequality: str
    grid: GridSpec
    evaluated: int
    worst_margin: float
    witness: dict[str, float]
    passed: bool = Field(alias="pass")
    expected: bool = True
    tolerance: float
    uncertainty: Optional[float] = None
    note: Optional[str] = None
    seconds: float

    @property
    def as_expected(self) -> bool:
        return self.passed == self.expected
