# src/hypercube/api/v1/verify.py
from __future__ import annotations

from typing import Optional

from fastapi import APIRouter, HTTPException, status
from pydantic import BaseModel, Field

from hypercube.api.deps import toolkit_errors
from hypercube.schemas.verification import GridAxis, GridSpec, VerificationReport
from hypercube.services import scan

router = APIRouter()


class VerifyPayload(BaseModel):
    """Axes replace the registered default grid; fixed values are merged in."""

    axes: Optional[list[GridAxis]] = None
    fixed: dict[str, float] = {}
    refine: bool = True
    refine_width: float = Field(1e-4, gt=0)
    tolerance: Optional[float] = Field(None, ge=0)


@router.get("")
def list_inequalities() -> dict[str, str]:
    return {key: entry.summary for key, entry in sorted(scan.REGISTRY.items())}


@router.post("/{inequality}", response_model=VerificationReport, response_model_by_alias=True)
def verify(inequality: str, payload: VerifyPayload) -> VerificationReport:
    if inequality not in scan.REGISTRY:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND, detail=f"unknown inequality '{inequality}'"
        )
    entry = scan.REGISTRY[inequality]
    with toolkit_errors():
        try:
            if payload.axes is None:
                grid = entry.default_grid(
                    payload.fixed, refine=payload.refine, refine_width=payload.refine_width
                )
            else:
                grid = GridSpec(
                    axes=payload.axes,
                    fixed=payload.fixed,
                    refine=payload.refine,
                    refine_width=payload.refine_width,
                )
        except ValueError as exc:
            raise HTTPException(
                status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)
            ) from exc
        return scan.scan(inequality, grid, tolerance=payload.tolerance)
