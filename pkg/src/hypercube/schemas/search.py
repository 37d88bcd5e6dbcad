# src/hypercube/schemas/search.py
"""Counterexample-search schemas (Pydantic models)."""

import base64
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from hypercube.config import HARD_SEARCH_DIMENSION_CAP
from hypercube.schemas.verification import SCHEMA_VERSION


def encode_coefficients(coeffs: np.ndarray) -> str:
    """Base64 of the little-endian complex128 bytes."""
    raw = np.ascontiguousarray(coeffs, dtype="<c16").tobytes()
    return base64.b64encode(raw).decode("ascii")


def decode_coefficients(block: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(block), dtype="<c16").astype(np.complex128)


class SearchConfig(BaseModel):
    """Random-restart hill climbing settings; the seed fixes the output."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(1, ge=1, le=HARD_SEARCH_DIMENSION_CAP)
    restarts: int = Field(256, ge=1)
    steps: int = Field(200, ge=1)
    initial_step: float = Field(0.5, gt=0)
    decay: float = Field(0.5, gt=0, lt=1)
    plateau: int = Field(10, ge=1, description="rejections in a row before decaying")
    min_step: float = Field(1e-7, gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    batch_size: Optional[int] = Field(None, ge=1)
    workers: Optional[int] = Field(None, ge=1)


class SearchResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    p: float
    q: float
    z: tuple[float, float]
    n: int
    best_ratio: float
    restart: int
    evaluations: int
    violation: bool
    witness: str = Field(description="base64, little-endian complex128 coefficients")
    config: SearchConfig
    seconds: float

    @property
    def coefficients(self) -> np.ndarray:
        return decode_coefficients(self.witness)
