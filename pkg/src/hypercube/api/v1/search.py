# src/hypercube/api/v1/search.py
from __future__ import annotations

from typing import Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from hypercube.api.deps import toolkit_errors
from hypercube.schemas.search import SearchConfig, SearchResult
from hypercube.services.oracle import search_violation

router = APIRouter()


class SearchPayload(BaseModel):
    p: float = Field(ge=1)
    q: Optional[float] = None
    z: tuple[float, float]
    config: SearchConfig = SearchConfig()


@router.post("", response_model=SearchResult, response_model_by_alias=True)
def search(payload: SearchPayload) -> SearchResult:
    q = payload.p if payload.q is None else payload.q
    with toolkit_errors():
        return search_violation(payload.p, q, complex(*payload.z), payload.config)
