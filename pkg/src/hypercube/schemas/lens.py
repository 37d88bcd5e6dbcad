# src/hypercube/schemas/lens.py
"""Lens-domain parameter models (Pydantic)."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LensParams(BaseModel):
    """Exponents of Ω_{p,q} and, when p = q, the derived lens geometry."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(gt=1)
    q: float
    real_half_width: float = Field(description="√((p-1)/(q-1)), the half-width of Ω^ℝ")
    center_offset: Optional[float] = None
    radius: Optional[float] = None
    alpha: Optional[float] = None
    s: Optional[float] = None
    real_cap: Optional[float] = None

    @model_validator(mode="after")
    def _check_order(self) -> "LensParams":
        if self.q < self.p:
            raise ValueError(f"need p <= q, got p={self.p}, q={self.q}")
        return self

    @property
    def symmetric(self) -> bool:
        return self.p == self.q


class PolarBoundary(BaseModel):
    t: float
    r: float = Field(ge=0)
    c: float

    @property
    def C(self) -> float:
        return self.c * self.c
