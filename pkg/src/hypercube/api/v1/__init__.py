from fastapi import APIRouter

from . import health, lens, multiplier, search, verify

api_router = APIRouter()

api_router.include_router(health.router, tags=["health"])
api_router.include_router(lens.router, tags=["lens"])  # → /api/v1/admissible, /api/v1/boundary
api_router.include_router(
    verify.router, prefix="/verify", tags=["verify"]
)  # → /api/v1/verify/{inequality}
api_router.include_router(
    search.router, prefix="/search", tags=["search"]
)  # → /api/v1/search
api_router.include_router(
    multiplier.router, prefix="/multiplier", tags=["multiplier"]
)  # → /api/v1/multiplier/solve
