# src/hypercube/errors.py
"""Exception hierarchy shared by the services, the CLI and the HTTP API."""

from __future__ import annotations

from typing import Any


class ToolkitError(Exception):
    """Base class for every error raised on purpose by this package."""


class InvalidInputError(ToolkitError, ValueError):
    """A precondition of an operation was violated by its arguments."""


class ResourceError(ToolkitError):
    """The requested cube dimension exceeds the configured cap."""


class NumericError(ToolkitError, ArithmeticError):
    """An iterative method failed to converge.

    ``diagnostics`` carries whatever the failing routine knew at the time
    (iteration counts, residuals, solver status) so that the CLI and the API
    can surface it.
    """

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None):
        super().__init__(message)
        self.diagnostics: dict[str, Any] = dict(diagnostics or {})


class FeasibilityError(NumericError):
    """The moment equalities cannot be met on the current discretization."""


class ConsistencyError(NumericError):
    """A computed lower bound exceeds the matching upper bound."""


class SearchFailure(ToolkitError):
    """An exhaustive search ended without producing the requested witness."""
