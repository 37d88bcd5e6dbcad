# src/hypercube/services/inequalities.py
"""Margins of the two-point inequality and of each step of its proof chain.

Every margin is oriented so that a nonnegative value means the inequality
holds at that point. All functions broadcast over numpy arrays.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hypercube.errors import InvalidInputError, SearchFailure
from hypercube.schemas.verification import ReducedPoint
from hypercube.services.lens import c_of_t
from hypercube.services.numerics import grid_then_brent

logger = logging.getLogger(__name__)

Real = NDArray[np.float64] | float

HALF_PI = 0.5 * math.pi
SQRT3 = math.sqrt(3.0)
UNIT_TOLERANCE = 1e-12
DEFAULT_TRUNCATION = 64


def _out(x: np.ndarray) -> Real:
    return float(x) if np.ndim(x) == 0 else x


def _check_order(p: float, q: float) -> None:
    if not 1 <= p <= q:
        raise InvalidInputError(f"need 1 <= p <= q, got p={p}, q={q}")


def _pow(base: ArrayLike, e: ArrayLike) -> np.ndarray:
    # bases that are squared moduli may dip below zero by rounding
    return np.maximum(np.asarray(base, dtype=np.float64), 0.0) ** e


# --- Two-point inequality ----------------------------------------------------------


def two_point_margin(p: float, q: float, z: ArrayLike, w: ArrayLike) -> Real:
    """((|1+w|^p+|1-w|^p)/2)^{q/p} - (|1+wz|^q+|1-wz|^q)/2."""
    _check_order(p, q)
    zz = np.asarray(z, dtype=np.complex128)
    ww = np.asarray(w, dtype=np.complex128)
    lhs = ((np.abs(1 + ww) ** p + np.abs(1 - ww) ** p) / 2.0) ** (q / p)
    wz = ww * zz
    rhs = (np.abs(1 + wz) ** q + np.abs(1 - wz) ** q) / 2.0
    return _out(lhs - rhs)


def real_two_point_margin(p: float, q: float, a: ArrayLike, b: ArrayLike) -> Real:
    """Real two-point inequality at the ratio r = √((p-1)/(q-1))."""
    if not 1 < p <= q:
        raise InvalidInputError(f"need 1 < p <= q, got p={p}, q={q}")
    aa = np.asarray(a, dtype=np.float64)
    bb = np.asarray(b, dtype=np.float64)
    r = math.sqrt((p - 1.0) / (q - 1.0))
    big = ((np.abs(aa + bb) ** p + np.abs(aa - bb) ** p) / 2.0) ** (1.0 / p)
    small = ((np.abs(aa + r * bb) ** q + np.abs(aa - r * bb) ** q) / 2.0) ** (1.0 / q)
    return _out(big - small)


def necessity_margin(p: float, q: float, z: ArrayLike, v: ArrayLike) -> Real:
    """(|v|²+(p-2)(Re v)²) - (|vz|²+(q-2)(Re vz)²) for unit v."""
    vv = np.asarray(v, dtype=np.complex128)
    if np.any(np.abs(np.abs(vv) - 1.0) > UNIT_TOLERANCE):
        raise InvalidInputError("v must lie on the unit circle")
    zz = np.asarray(z, dtype=np.complex128)
    vz = vv * zz
    left = np.abs(vv) ** 2 + (p - 2.0) * vv.real**2
    right = np.abs(vz) ** 2 + (q - 2.0) * vz.real**2
    return _out(left - right)


def min_necessity_margin(p: float, q: float, z: complex, samples: int = 720) -> float:
    """Minimum of necessity_margin over the unit circle."""
    _, value = grid_then_brent(
        lambda theta: np.asarray(necessity_margin(p, q, z, np.exp(1j * theta))),
        0.0,
        2.0 * math.pi,
        samples=samples,
        periodic=True,
    )
    return value


# --- Reduced form and angle reduction ------------------------------------------------


def reduced_margin_values(
    s: ArrayLike, c: ArrayLike, a: ArrayLike, t: ArrayLike, y: ArrayLike
) -> Real:
    """LHS - RHS of the two-point inequality rewritten with |w| = y, arg w = a."""
    s, c, a, t, y = (np.asarray(v, dtype=np.float64) for v in (s, c, a, t, y))
    cy = c * y
    cos_at = np.cos(a + t)
    cos_a = np.cos(a)
    lhs = _pow(cy * cy + 1 + 2 * cy * cos_at, s) + _pow(cy * cy + 1 - 2 * cy * cos_at, s)
    rhs = _pow(y * y + 1 + 2 * y * cos_a, s) + _pow(y * y + 1 - 2 * y * cos_a, s)
    return _out(lhs - rhs)


def reduced_margin(pt: ReducedPoint) -> float:
    return float(reduced_margin_values(pt.s, pt.c, pt.a, pt.t, pt.y))


def full_margin(p: float, a: ArrayLike, t: ArrayLike, y: ArrayLike) -> Real:
    """The reduced margin for arbitrary angles, with c = c(t)."""
    return reduced_margin_values(p / 2.0, c_of_t(p, t), a, t, y)


class FoldedAngles(NamedTuple):
    a: float
    t: float
    trivial: bool


def fold_angles(a: float, t: float) -> FoldedAngles:
    """Map (a, t) into 0 <= a <= a+t <= π/2 without changing |cos a|, |cos(a+t)|.

    ``trivial`` is set when |cos(a+t)| >= |cos a|, in which case the
    inequality holds outright and the angles are returned unchanged.
    c(t) never increases under the map.
    """
    a = math.fmod(a, 2 * math.pi) % (2 * math.pi)
    t = math.fmod(t, 2 * math.pi) % (2 * math.pi)
    if abs(math.cos(a + t)) >= abs(math.cos(a)):
        return FoldedAngles(a, t, True)
    if a >= math.pi:
        a -= math.pi
    if a > HALF_PI:
        a, t = math.pi - a, (2 * math.pi - t) % (2 * math.pi)
    u = a + t
    if u > math.pi + a:
        t -= math.pi
        u -= math.pi
    if u >= HALF_PI:
        t = math.pi - t - 2 * a
    return FoldedAngles(a, max(t, 0.0), False)


def angle_ratio_margin(p: float, a: ArrayLike, t: ArrayLike) -> Real:
    """c(t) - √(1+(p-2)cos²a)/√(1+(p-2)cos²(a+t))."""
    if p < 2:
        raise InvalidInputError(f"need p >= 2, got p={p}")
    aa = np.asarray(a, dtype=np.float64)
    tt = np.asarray(t, dtype=np.float64)
    ratio = np.sqrt(1 + (p - 2) * np.cos(aa) ** 2) / np.sqrt(
        1 + (p - 2) * np.cos(aa + tt) ** 2
    )
    return _out(np.asarray(c_of_t(p, tt)) - ratio)


# --- Mock log-Sobolev monotonicity ---------------------------------------------------


class MockLogSobWitness(NamedTuple):
    x: float
    theta: float
    slope: float


def mock_logsob_value(p: float, x: ArrayLike, theta: ArrayLike) -> Real:
    """Σ± (1 + x²/g ± 2x cos θ/√g)^{p/2} with g = 1+(p-2)cos²θ."""
    if not p > 2:
        raise InvalidInputError(f"need p > 2, got p={p}")
    xx = np.asarray(x, dtype=np.float64)
    th = np.asarray(theta, dtype=np.float64)
    g = 1.0 + (p - 2.0) * np.cos(th) ** 2
    base = 1.0 + xx * xx / g
    cross = 2.0 * xx * np.cos(th) / np.sqrt(g)
    return _out(_pow(base + cross, p / 2.0) + _pow(base - cross, p / 2.0))


def mock_logsob_slope(p: float, x: ArrayLike, theta: ArrayLike, h: float) -> Real:
    """Forward difference quotient of mock_logsob_value in θ."""
    if not h > 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    th = np.asarray(theta, dtype=np.float64)
    ahead = np.asarray(mock_logsob_value(p, x, th + h))
    here = np.asarray(mock_logsob_value(p, x, th))
    return _out((ahead - here) / h)


def mock_logsob_counterexample(
    p: float, threshold: float = -1e-6, samples: int = 400
) -> MockLogSobWitness:
    """A point where the map θ ↦ mock_logsob_value decreases, for 2 < p < 3.

    The decrease appears for small θ first, so the search starts on [0, π/4]
    with x up to 2√(p-1) and widens only if nothing is found.
    """
    if not 2 < p < 3:
        raise InvalidInputError(f"counterexamples exist only for 2 < p < 3, got p={p}")
    searches = (
        (2.0 * math.sqrt(p - 1.0), 0.25 * math.pi, 1e-3),
        (10.0, HALF_PI, 1e-4),
    )
    for x_max, theta_max, h in searches:
        xs = np.linspace(x_max / samples, x_max, samples)
        thetas = np.linspace(0.0, theta_max - h, samples)
        X, TH = np.meshgrid(xs, thetas, indexing="ij")
        slopes = np.asarray(mock_logsob_slope(p, X, TH, h))
        k = np.unravel_index(int(np.argmin(slopes)), slopes.shape)
        if slopes[k] <= threshold:
            witness = MockLogSobWitness(float(X[k]), float(TH[k]), float(slopes[k]))
            logger.debug("mock log-Sobolev counterexample at p=%g: %s", p, witness)
            return witness
    raise SearchFailure(f"no decreasing point found for p={p}")


# --- Series reduction --------------------------------------------------------------


def binom(s: ArrayLike, k: int) -> Real:
    """Generalized binomial coefficient by the falling-factorial product."""
    if k < 0:
        raise InvalidInputError(f"k must be nonnegative, got {k}")
    ss = np.asarray(s, dtype=np.float64)
    out = np.ones_like(ss)
    for i in range(k):
        out = out * (ss - i) / (i + 1)
    return _out(out)


def sqrt_series_coefficient(k: int) -> Fraction:
    """a_k = 2|binom(1/2, k)| as an exact rational; a_2 = 1/4."""
    if k < 2:
        raise InvalidInputError(f"need k >= 2, got {k}")
    value = Fraction(1)
    half = Fraction(1, 2)
    for i in range(k):
        value *= (half - i) / (i + 1)
    return 2 * abs(value)


def cap_sup(ell: ArrayLike) -> Real:
    """sup_x cos^{2ℓ-1}(x) sin(x) = ((2ℓ-1)/(2ℓ))^{(2ℓ-1)/2} / √(2ℓ)."""
    m = 2.0 * np.asarray(ell, dtype=np.float64)
    return _out(((m - 1) / m) ** ((m - 1) / 2) / np.sqrt(m))


def series_coefficient(ell: int, s: ArrayLike) -> Real:
    """b_ℓ = √(2ℓ)·((2ℓ-1)/(2ℓ))^{(2ℓ-1)/2}·|binom(s, 2ℓ)|."""
    m = 2 * ell
    return _out(
        math.sqrt(m) * ((m - 1) / m) ** ((m - 1) / 2) * np.abs(np.asarray(binom(s, m)))
    )


def coefficient_ratio_check(ell: ArrayLike, s: ArrayLike) -> Real:
    """(ℓ-½)/(ℓ+1) - b_{ℓ+1}/b_ℓ, with the binomial ratio in closed form."""
    ll = np.asarray(ell, dtype=np.float64)
    if np.any(ll < 2):
        raise InvalidInputError("need ell >= 2")
    ss = np.asarray(s, dtype=np.float64)
    m = 2 * ll
    binom_ratio = (m - ss) * (m + 1 - ss) / ((m + 1) * (m + 2))
    cap_ratio = ((m + 1) / (m + 2)) ** ((m + 1) / 2) / ((m - 1) / m) ** ((m - 1) / 2)
    ratio = np.sqrt((ll + 1) / ll) * binom_ratio * cap_ratio
    return _out((ll - 0.5) / (ll + 1) - ratio)


def _series_sum(s, a, t, w, truncation: int) -> np.ndarray:
    """Σ_{ℓ=2}^{L} w^{2ℓ}(cos^{2ℓ}a - cos^{2ℓ}(a+t))·binom(s, 2ℓ)."""
    cos2_a = np.cos(a) ** 2
    cos2_at = np.cos(a + t) ** 2
    w2 = w * w
    coeff = np.ones_like(s)  # binom(s, 2ℓ), built two factors at a time
    pa, pat, pw = np.ones_like(cos2_a), np.ones_like(cos2_at), np.ones_like(w2)
    total = np.zeros(np.broadcast(s, a, t, w).shape)
    for ell in range(1, truncation + 1):
        k = 2 * ell
        coeff = coeff * (s - (k - 2)) / (k - 1) * (s - (k - 1)) / k
        pa, pat, pw = pa * cos2_a, pat * cos2_at, pw * w2
        if ell >= 2:
            total = total + pw * (pa - pat) * coeff
    return total


def _series_rhs(s, t, y) -> np.ndarray:
    w = 2 * y / (1 + y * y)
    return SQRT3 / 4 * s * (s - 1) * (s - 2) * (s - 3) / 2 * w * w * y * y * np.sin(t)


def series_bound_margin(
    s: ArrayLike,
    a: ArrayLike,
    t: ArrayLike,
    y: ArrayLike,
    L: int = DEFAULT_TRUNCATION,
) -> Real:
    """(√3/4)·s(s-1)(s-2)(s-3)/2·w²y²·sin t minus the series truncated at L."""
    if L < 16:
        raise InvalidInputError(f"truncation must be at least 16, got {L}")
    s, a, t, y = (np.asarray(v, dtype=np.float64) for v in (s, a, t, y))
    w = 2 * y / (1 + y * y)
    return _out(_series_rhs(s, t, y) - _series_sum(s, a, t, w, L))


def series_tail_bound(
    s: ArrayLike, t: ArrayLike, y: ArrayLike, L: int = DEFAULT_TRUNCATION
) -> Real:
    """Upper bound on the absolute value of the dropped terms ℓ > L.

    Uses b_ℓ <= a_ℓ·b_{L+1}/a_{L+1} for ℓ > L and the closed form
    Σ_{ℓ>=2} a_ℓ w^{2ℓ} = 2 - 2√(1-w²) - w².
    """
    s, t, y = (np.asarray(v, dtype=np.float64) for v in (s, t, y))
    w2 = (2 * y / (1 + y * y)) ** 2
    a_coef = 0.25
    partial = np.zeros_like(w2)
    power = w2 * w2
    for k in range(2, L + 1):
        partial = partial + a_coef * power
        a_coef *= (k - 0.5) / (k + 1)
        power = power * w2
    # a_coef is now a_{L+1}
    closed = 2 - 2 * np.sqrt(np.maximum(1 - w2, 0.0)) - w2
    rest = np.maximum(closed - partial, 0.0) + 8 * np.finfo(float).eps * w2 * w2
    scale = np.asarray(series_coefficient(L + 1, s)) / a_coef
    return _out(np.abs(np.sin(t)) * scale * rest)


def cap_integral_margin(ell: ArrayLike, a: ArrayLike, t: ArrayLike) -> Real:
    """sup·sin t - ∫_a^{a+t} cos^{2ℓ-1}x sin x dx (integral in closed form)."""
    ll = np.asarray(ell)
    if np.any(ll < 2) or np.any(ll != np.round(ll)):
        raise InvalidInputError("ell must be an integer >= 2")
    ll = ll.astype(np.float64)
    aa = np.asarray(a, dtype=np.float64)
    tt = np.asarray(t, dtype=np.float64)
    m = 2 * ll
    integral = (np.cos(aa) ** m - np.cos(aa + tt) ** m) / m
    return _out(np.asarray(cap_sup(ll)) * np.sin(tt) - integral)


def cap_profile(ell: int, x: ArrayLike) -> Real:
    """cos^{2ℓ-1}x·sin x on [0, π/2], zero elsewhere."""
    xx = np.asarray(x, dtype=np.float64)
    inside = (xx >= 0) & (xx <= HALF_PI)
    return _out(np.where(inside, np.cos(xx) ** (2 * ell - 1) * np.sin(xx), 0.0))


def cap_envelope(ell: int, x: ArrayLike) -> Real:
    """Two cosine arcs with the same peak as cap_profile at x0 = arcsin(1/√(2ℓ)).

    The left arc has frequency 2√ℓ and the right arc A with 1/A + 1/(2√ℓ) = 1,
    so the support has length π/2.
    """
    if ell < 1:
        raise InvalidInputError(f"need ell >= 1, got {ell}")
    xx = np.asarray(x, dtype=np.float64)
    x0 = math.asin(1.0 / math.sqrt(2 * ell))
    peak = float(cap_sup(ell))
    left_freq = 2.0 * math.sqrt(ell)
    right_freq = 1.0 / (1.0 - 1.0 / left_freq)
    start = x0 - HALF_PI / left_freq
    stop = x0 + HALF_PI / right_freq
    arc = np.where(
        xx <= x0, np.cos(left_freq * (x0 - xx)), np.cos(right_freq * (xx - x0))
    )
    return _out(np.where((xx > start) & (xx < stop), peak * arc, 0.0))


# --- Bernoulli sharpening and the final chain ------------------------------------------


def _quadratic_part(s, c, a, t, y) -> np.ndarray:
    cy = c * y
    X = (1 + cy * cy) / (1 + y * y)
    b2 = s * (s - 1) / 2
    lead = X**s * (1 + (2 * cy * np.cos(a + t) / (1 + cy * cy)) ** 2 * b2)
    return lead - 1 - (2 * y * np.cos(a) / (1 + y * y)) ** 2 * b2


def bernoulli_margin(
    s: ArrayLike, c: ArrayLike, a: ArrayLike, t: ArrayLike, y: ArrayLike
) -> Real:
    """Quadratic part of the series form minus the quartic series bound."""
    s, c, a, t, y = (np.asarray(v, dtype=np.float64) for v in (s, c, a, t, y))
    return _out(_quadratic_part(s, c, a, t, y) - _series_rhs(s, t, y))


def quartic_reduction_margin(
    s: ArrayLike,
    c: ArrayLike,
    a: ArrayLike,
    t: ArrayLike,
    y: ArrayLike,
    L: int = DEFAULT_TRUNCATION,
) -> Real:
    """Quadratic part of the series form minus the truncated quartic series."""
    s, c, a, t, y = (np.asarray(v, dtype=np.float64) for v in (s, c, a, t, y))
    w = 2 * y / (1 + y * y)
    return _out(_quadratic_part(s, c, a, t, y) - _series_sum(s, a, t, w, L))


def chain_angle(s: ArrayLike, C: ArrayLike) -> Real:
    """t with (s-1)·sin t = (C-1)√(2s-1)/(2√C), i.e. c(t)² = C on the lens."""
    ss = np.asarray(s, dtype=np.float64)
    CC = np.asarray(C, dtype=np.float64)
    sin_t = (CC - 1) * np.sqrt(2 * ss - 1) / (2 * np.sqrt(CC) * (ss - 1))
    return _out(np.arcsin(np.clip(sin_t, -1.0, 1.0)))


def final_chain_margin(s: ArrayLike, C: ArrayLike, a: ArrayLike, t: ArrayLike) -> Real:
    """Linear-in-u lower bound at u = y² ∈ {0, 1/C}; the smaller endpoint."""
    s, C, a, t = (np.asarray(v, dtype=np.float64) for v in (s, C, a, t))
    cos2_at = np.cos(a + t) ** 2
    base = (C - 1) * (1 + 2 * (s - 1) * cos2_at) - 2 * (s - 1) * (
        np.cos(a) ** 2 - cos2_at
    )
    slope = (C - 1) * (1 - 2 * (s - 1) * (2 - s) * C * cos2_at) - (SQRT3 / 2) * (
        s - 1
    ) * (s - 2) * (s - 3) * np.sin(t)
    return _out(np.minimum(base, base + slope / C))


def endgame_margin(s: ArrayLike) -> Real:
    """(s - 3/2)² + 4/√3 - 9/4."""
    ss = np.asarray(s, dtype=np.float64)
    return _out((ss - 1.5) ** 2 + 4 / SQRT3 - 9 / 4)


def endgame_certificate() -> bool:
    """4/√3 >= 9/4 ⇔ √3 <= 16/9 ⇔ 3 <= 256/81, checked in exact rationals."""
    return Fraction(3) <= Fraction(16, 9) ** 2


def self_improvement_margin(
    s: ArrayLike, c: ArrayLike, a: ArrayLike, y: ArrayLike
) -> Real:
    """Both sides rescaled by c^p after substituting ỹ = 1/(c²y); needs c·y > 1."""
    s, c, a, y = (np.asarray(v, dtype=np.float64) for v in (s, c, a, y))
    if np.any(c < 1):
        raise InvalidInputError("need c >= 1")
    if np.any(c * y <= 1):
        raise InvalidInputError("need c*y > 1")
    return self_improvement_values(s, c, a, y)


def self_improvement_values(
    s: ArrayLike, c: ArrayLike, a: ArrayLike, y: ArrayLike
) -> Real:
    """self_improvement_margin without the precondition checks."""
    s, c, a, y = (np.asarray(v, dtype=np.float64) for v in (s, c, a, y))
    cross = 2 / y * np.cos(a)
    big = c * c + 1 / (c * c * y * y)
    small = 1 + 1 / (y * y)
    lhs = _pow(big + cross, s) + _pow(big - cross, s)
    rhs = _pow(small + cross, s) + _pow(small - cross, s)
    return _out(lhs - rhs)
