# src/hypercube/services/lens.py
"""Geometry of the admissible region Ω_{p,q} ⊂ ℂ.

z is admissible for (p, q) when |p-2-z²(q-2)| <= p-|z|²q. For p = q the
region is the lens cut out by two disks through ±1 whose centers sit at
±i·|p-2|/(2√(p-1)); its polar boundary r(t) is even and π-periodic with
r(0) = 1.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hypercube.errors import InvalidInputError, NumericError
from hypercube.schemas.lens import LensParams, PolarBoundary
from hypercube.services.numerics import grid_then_brent

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-12
INF_GRID = 512
INF_XATOL = 1e-11


def _check_exponents(p: float, q: float) -> None:
    if not (math.isfinite(p) and math.isfinite(q)):
        raise InvalidInputError(f"exponents must be finite, got p={p}, q={q}")
    if p < 1:
        raise InvalidInputError(f"need p >= 1, got p={p}")
    if p > q:
        raise InvalidInputError(f"need p <= q, got p={p}, q={q}")


def _check_open_exponent(p: float, name: str = "p") -> None:
    if not (math.isfinite(p) and p > 1):
        raise InvalidInputError(f"need {name} > 1, got {name}={p}")


def center_offset(p: float) -> float:
    return abs(p - 2.0) / (2.0 * math.sqrt(p - 1.0))


def alpha(p: float) -> float:
    """Exterior-angle exponent α_p = 1 + (2/π)·arctan(|p-2|/(2√(p-1)))."""
    _check_open_exponent(p)
    return 1.0 + (2.0 / math.pi) * math.atan(center_offset(p))


def dual_exponent(p: float) -> float:
    _check_open_exponent(p)
    return p / (p - 1.0)


def lens_params(p: float, q: float | None = None) -> LensParams:
    q = p if q is None else q
    _check_open_exponent(p)
    _check_exponents(p, q)
    half_width = math.sqrt((p - 1.0) / (q - 1.0))
    if p != q:
        return LensParams(p=p, q=q, real_half_width=half_width)
    root = math.sqrt(p - 1.0)
    return LensParams(
        p=p,
        q=q,
        real_half_width=half_width,
        center_offset=center_offset(p),
        radius=p / (2.0 * root),
        alpha=alpha(p),
        s=p / 2.0,
        real_cap=min(root, 1.0 / root),
    )


def admissibility_margin(p: float, q: float, z: ArrayLike) -> NDArray[np.float64]:
    """(p - |z|²q) - |p-2-z²(q-2)|; nonnegative exactly on Ω_{p,q}."""
    zz = np.asarray(z, dtype=np.complex128)
    return (p - np.abs(zz) ** 2 * q) - np.abs(p - 2.0 - zz * zz * (q - 2.0))


def is_admissible(
    p: float, q: float, z: complex, tol: float = BOUNDARY_TOLERANCE
) -> bool:
    _check_exponents(p, q)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"z must be finite, got {z}")
    if q == 1.0:
        # then p = 1 too and Ω is the segment [-1, 1]
        return abs(z.imag) <= tol and abs(z.real) <= 1.0 + tol
    return bool(admissibility_margin(p, q, z) >= -tol)


# --- Polar boundary ------------------------------------------------------------


def _inf_ratio(p: float, q: float, t: float):
    def ratio(beta: np.ndarray) -> np.ndarray:
        num = 1.0 + (p - 2.0) * np.cos(beta) ** 2
        den = 1.0 + (q - 2.0) * np.cos(t + beta) ** 2
        return np.sqrt(num / den)

    return ratio


def _radius_inf_scalar(p: float, q: float, t: float) -> float:
    try:
        _, value = grid_then_brent(
            _inf_ratio(p, q, t),
            0.0,
            math.pi,
            samples=INF_GRID,
            xatol=INF_XATOL,
            periodic=True,
        )
    except NumericError as exc:
        exc.diagnostics.update({"p": p, "q": q, "t": t})
        raise
    return value


def boundary_radius_inf(p: float, q: float, t: ArrayLike) -> float | NDArray[np.float64]:
    """r(t) as the infimum over β of √((1+(p-2)cos²β)/(1+(q-2)cos²(t+β)))."""
    _check_open_exponent(p)
    _check_exponents(p, q)
    tt = np.asarray(t, dtype=np.float64)
    if tt.ndim == 0:
        return _radius_inf_scalar(p, q, float(tt))
    return np.array([_radius_inf_scalar(p, q, float(x)) for x in tt.reshape(-1)]).reshape(
        tt.shape
    )


def boundary_radius_closed(p: float, t: ArrayLike) -> float | NDArray[np.float64]:
    """r(t) for p = q from the circle through ±1 centred at -i·|p-2|/(2√(p-1)).

    Solves r² + 2kr|sin t| + k² = k² + 1, k the center offset.
    """
    _check_open_exponent(p)
    k = center_offset(p)
    sin_t = np.abs(np.sin(np.asarray(t, dtype=np.float64)))
    disc = k * k * sin_t * sin_t + 1.0
    if np.any(disc < 0):
        raise NumericError("negative discriminant in the closed boundary", {"p": p})
    r = -k * sin_t + np.sqrt(disc)
    return float(r) if r.ndim == 0 else r


def boundary_radius(p: float, q: float, t: ArrayLike) -> float | NDArray[np.float64]:
    if p == q:
        return boundary_radius_closed(p, t)
    return boundary_radius_inf(p, q, t)


def polar_boundary(p: float, q: float, t: float) -> PolarBoundary:
    r = float(boundary_radius(p, q, t))
    return PolarBoundary(t=t, r=r, c=1.0 / r)


def c_of_t(p: float, t: ArrayLike) -> float | NDArray[np.float64]:
    """c(t) = 1/r(t) for p = q."""
    r = boundary_radius_closed(p, t)
    return 1.0 / r


def boundary_points(p: float, q: float, count: int) -> NDArray[np.complex128]:
    """r(t_m)·e^{it_m} at t_m = 2πm/count."""
    if count < 1:
        raise InvalidInputError(f"need at least one boundary point, got {count}")
    t = 2.0 * np.pi * np.arange(count) / count
    r = np.asarray(boundary_radius(p, q, t), dtype=np.float64)
    return r * np.exp(1j * t)


# --- Numeric targets of the multiplier corollaries -------------------------------


def laplacian_bound(p: float, d: int) -> float:
    """10·d^{α_p}, the bound on ‖Δf‖_p/‖f‖_p for degree-d f."""
    if d < 0:
        raise InvalidInputError(f"degree must be nonnegative, got {d}")
    return 10.0 * float(d) ** alpha(p)


def heat_exponent(p: float) -> float:
    return 2.0 - alpha(p)
