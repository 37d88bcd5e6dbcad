# src/hypercube/api/v1/lens.py
from __future__ import annotations

import math
from typing import Any, Optional

from fastapi import APIRouter, Query
from pydantic import BaseModel, Field

from hypercube.api.deps import toolkit_errors
from hypercube.reports import admissible_report, boundary_rows

router = APIRouter()


class AdmissiblePayload(BaseModel):
    p: float = Field(ge=1)
    q: Optional[float] = None
    z: tuple[float, float]


@router.post("/admissible")
def admissible(payload: AdmissiblePayload) -> dict[str, Any]:
    with toolkit_errors():
        return admissible_report(payload.p, payload.q, complex(*payload.z))


@router.get("/boundary")
def boundary(
    p: float = Query(gt=1),
    q: Optional[float] = Query(None),
    count: int = Query(256, ge=1, le=4096),
    t_min: float = 0.0,
    t_max: float = math.pi,
) -> dict[str, Any]:
    """Polar boundary r(t) of the admissible region, row by row."""
    with toolkit_errors():
        columns, rows = boundary_rows(p, q, count, t_min, t_max)
    return {"schema": 1, "columns": columns, "rows": rows}
