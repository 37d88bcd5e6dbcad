# src/hypercube/services/numerics.py
from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from hypercube.errors import NumericError

logger = logging.getLogger(__name__)


def brent_in_bracket(
    func: Callable[[float], float],
    left: float,
    right: float,
    xatol: float = 1e-11,
    maxiter: int = 500,
) -> tuple[float, float]:
    """Bounded Brent search for a minimum of ``func`` on [left, right]."""
    res = minimize_scalar(
        func,
        bounds=(left, right),
        method="bounded",
        options={"xatol": xatol, "maxiter": maxiter},
    )
    if not res.success:
        raise NumericError(
            "bounded Brent refinement did not converge",
            {
                "bracket": [left, right],
                "iterations": int(res.nfev),
                "message": str(res.message),
            },
        )
    return float(res.x), float(res.fun)


def grid_then_brent(
    func: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    samples: int = 512,
    xatol: float = 1e-11,
    maxiter: int = 500,
    periodic: bool = False,
) -> tuple[float, float]:
    """Minimize a one-variable function on [lo, hi].

    ``func`` is evaluated vectorized on a coarse grid, then the best cell and
    its neighbours are handed to a bounded Brent search. With ``periodic`` the
    bracket may wrap past ``hi``, which the callee must tolerate.

    Returns (argmin, minimum).
    """
    if periodic:
        grid = np.linspace(lo, hi, samples, endpoint=False)
    else:
        grid = np.linspace(lo, hi, samples)
    values = np.asarray(func(grid), dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NumericError(
            "objective is not finite on the coarse grid",
            {"lo": lo, "hi": hi, "samples": samples},
        )
    k = int(np.argmin(values))
    step = (hi - lo) / (samples if periodic else samples - 1)
    left, right = grid[k] - step, grid[k] + step
    if not periodic:
        left, right = max(left, lo), min(right, hi)
    best_x, best_v = float(grid[k]), float(values[k])

    # nothing left to refine
    if np.ptp(values) == 0.0:
        return best_x, best_v

    try:
        x, v = brent_in_bracket(
            lambda x: float(np.asarray(func(np.array([x])))[0]),
            left,
            right,
            xatol=xatol,
            maxiter=maxiter,
        )
    except NumericError as exc:
        exc.diagnostics["grid_minimum"] = best_v
        raise
    if v <= best_v:
        return x, v
    return best_x, best_v
