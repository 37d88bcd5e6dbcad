"""Health check that also reports the limits this process runs with."""

from datetime import datetime, timezone
from typing import Any

from fastapi import APIRouter

from hypercube.config import settings
from hypercube.schemas.verification import SCHEMA_VERSION

router = APIRouter()


@router.get("/health")
def health_check() -> dict[str, Any]:
    """Status, timestamp, report schema version and the cube-size caps.

    Clients compare ``schema`` with the ``schema`` field of stored reports
    before replaying them.
    """
    return {
        "status": "ok",
        "time": datetime.now(timezone.utc).isoformat(),
        "schema": SCHEMA_VERSION,
        "version": settings.app_version,
        "caps": {
            "dimension": settings.dimension_cap,
            "search": settings.search_dimension_cap,
            "certify": settings.certify_dimension_cap,
        },
    }
