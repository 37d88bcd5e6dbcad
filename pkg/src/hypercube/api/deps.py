# src/hypercube/api/deps.py
from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager

from fastapi import HTTPException, status

from hypercube.errors import (
    InvalidInputError,
    NumericError,
    ResourceError,
    SearchFailure,
    ToolkitError,
)


def http_error(exc: ToolkitError) -> HTTPException:
    if isinstance(exc, NumericError):
        return HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail={"error": str(exc), "diagnostics": exc.diagnostics},
        )
    if isinstance(exc, SearchFailure):
        return HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(exc))
    if isinstance(exc, (InvalidInputError, ResourceError)):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(exc))


@contextmanager
def toolkit_errors() -> Iterator[None]:
    """Re-raise toolkit errors from a route body as HTTP errors."""
    try:
        yield
    except ToolkitError as exc:
        raise http_error(exc) from exc
