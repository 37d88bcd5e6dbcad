# src/hypercube/main.py
from __future__ import annotations

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from hypercube.api.v1 import api_router as api_v1_router
from hypercube.api.v1 import health
from hypercube.config import settings
from hypercube.log import configure_logging

configure_logging()

# -----------------------------------------------------------------------------
# FastAPI app
# -----------------------------------------------------------------------------
app = FastAPI(
    title=settings.app_title,
    version=settings.app_version,
    debug=settings.debug,
)


# --- CORS --------------------------------------------------------------------
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.allowed_origins,
    allow_credentials=False,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


# --- Routers -----------------------------------------------------------------
app.include_router(api_v1_router, prefix="/api/v1")


# --- Health ------------------------------------------------------------------
# unversioned alias of /api/v1/health
app.add_api_route("/health", health.health_check, methods=["GET"], tags=["health"])
