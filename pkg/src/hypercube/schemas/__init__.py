# src/hypercube/schemas/__init__.py
"""Schemas package for request/response and report models (Pydantic)."""

from .lens import LensParams, PolarBoundary
from .moment import AtomicMeasure, MomentProblem, MomentTolerances, NormSandwich
from .run import RunConfig
from .search import SearchConfig, SearchResult
from .verification import GridAxis, GridSpec, ReducedPoint, VerificationReport

__all__ = [
    "LensParams",
    "PolarBoundary",
    "AtomicMeasure",
    "MomentProblem",
    "MomentTolerances",
    "NormSandwich",
    "RunConfig",
    "SearchConfig",
    "SearchResult",
    "GridAxis",
    "GridSpec",
    "ReducedPoint",
    "VerificationReport",
]
