# src/hypercube/schemas/moment.py
"""Moment-problem schemas (Pydantic models).

A multiplier φ on degrees 0..d is bounded on L^p → L^q by the total
variation of any measure μ on the admissible region with ∫ z^j dμ = φ(j).
"""

import math
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from hypercube.schemas.verification import SCHEMA_VERSION

Pair = tuple[float, float]


def default_samples(d: int) -> int:
    return max(64, 16 * (d + 1))


class MomentTolerances(BaseModel):
    gap: float = Field(1e-6, gt=0, description="target for upper - lower")
    feasibility: float = Field(1e-8, gt=0, description="max moment residual")


class MomentProblem(BaseModel):
    """Find the least-TV measure on Ω_{p,q} (or Ω^ℝ) with moments φ(0..d)."""

    p: float = Field(gt=1)
    q: Optional[float] = None
    d: int = Field(ge=0, le=32)
    phi: list[Pair]
    M: Optional[int] = Field(None, ge=1, description="boundary discretization count")
    domain: Literal["complex", "real"] = "complex"
    tolerances: MomentTolerances = MomentTolerances()

    @field_validator("phi", mode="before")
    @classmethod
    def _pairs(cls, v: Any) -> Any:
        if isinstance(v, np.ndarray):
            v = v.tolist()
        out = []
        for item in v:
            if isinstance(item, (int, float, complex)):
                item = complex(item)
                out.append((item.real, item.imag))
            else:
                out.append(item)
        return out

    @model_validator(mode="after")
    def _check(self) -> "MomentProblem":
        if self.q is None:
            self.q = self.p
        if self.q < self.p:
            raise ValueError(f"need p <= q, got p={self.p}, q={self.q}")
        if len(self.phi) != self.d + 1:
            raise ValueError(f"need d+1 = {self.d + 1} multiplier values, got {len(self.phi)}")
        if not all(math.isfinite(x) for pair in self.phi for x in pair):
            raise ValueError("multiplier values must be finite")
        if self.M is None:
            self.M = default_samples(self.d)
        if self.M < 8 * (self.d + 1):
            raise ValueError(f"need M >= 8(d+1) = {8 * (self.d + 1)}, got M={self.M}")
        return self

    @property
    def values(self) -> np.ndarray:
        return np.array([complex(re, im) for re, im in self.phi], dtype=np.complex128)

    @classmethod
    def from_values(cls, p: float, values: Any, **kw: Any) -> "MomentProblem":
        values = np.asarray(values, dtype=np.complex128)
        return cls(p=p, d=len(values) - 1, phi=values, **kw)


class AtomicMeasure(BaseModel):
    """Σ c_k δ_{z_k}; atoms are (Re z, Im z, Re c, Im c)."""

    atoms: list[tuple[float, float, float, float]]
    tv_norm: float = Field(ge=0)
    residual: float = Field(0.0, ge=0, description="max |Σ c_k z_k^j - φ(j)|")
    certificate: Optional[float] = Field(
        None, description="lower bound carried by the final dual certificate"
    )

    @property
    def locations(self) -> np.ndarray:
        return np.array([complex(a[0], a[1]) for a in self.atoms], dtype=np.complex128)

    @property
    def weights(self) -> np.ndarray:
        return np.array([complex(a[2], a[3]) for a in self.atoms], dtype=np.complex128)

    def moments(self, d: int) -> np.ndarray:
        z = self.locations
        return np.array([np.sum(self.weights * z**j) for j in range(d + 1)])


class NormSandwich(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    lower: float
    upper: float
    measure: Optional[AtomicMeasure] = None
    dual: list[Pair] = Field(default_factory=list, description="a_0..a_d attaining lower")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def gap(self) -> float:
        return self.upper - self.lower
