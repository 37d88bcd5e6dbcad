# src/hypercube/api/v1/multiplier.py
from __future__ import annotations

from typing import Any

from fastapi import APIRouter

from hypercube.api.deps import toolkit_errors
from hypercube.schemas.moment import MomentProblem
from hypercube.services.multiplier import dump_solution, solve

router = APIRouter()


@router.post("/solve")
def solve_problem(problem: MomentProblem) -> dict[str, Any]:
    """Sandwich the multiplier norm; atoms come back as [re, im, wre, wim]."""
    with toolkit_errors():
        return dump_solution(solve(problem))
