# src/hypercube/services/cube.py
"""Fourier–Walsh representation of complex functions on {-1, 1}^n.

Coefficients are indexed by a subset bitmask S where bit j-1 stands for
coordinate j. Vertex index b maps to the point with x_j = +1 when bit j-1 of
b is set and x_j = -1 otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hypercube.config import settings
from hypercube.errors import InvalidInputError, ResourceError

logger = logging.getLogger(__name__)

ComplexArray = NDArray[np.complex128]
RealArray = NDArray[np.float64]

# imaginary parts below this count as zero
REAL_TOLERANCE = 1e-12


@lru_cache(maxsize=None)
def popcounts(n: int) -> NDArray[np.int64]:
    """|S| for every bitmask S of an n-dimensional cube (read-only)."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        pc[1 << j : 1 << (j + 1)] = pc[: 1 << j] + 1
    pc.setflags(write=False)
    return pc


def _butterfly(a: ComplexArray) -> ComplexArray:
    """Unnormalized Walsh–Hadamard butterfly along the last axis.

    Works on a copy; leading axes are treated as a batch.
    """
    out = np.array(a, dtype=np.complex128, copy=True)
    size = out.shape[-1]
    batch = out.shape[:-1]
    h = 1
    while h < size:
        v = out.reshape(*batch, -1, 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] = x + y
        v[..., 1, :] = x - y
        h *= 2
    return out


def _sign_twist(n: int) -> RealArray:
    # w_S(x_b) = (-1)^{|S|} (-1)^{popcount(S & b)} under the vertex ordering above
    return np.where(popcounts(n) % 2 == 0, 1.0, -1.0)


def _dimension_of(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise InvalidInputError(f"length must be a power of two, got {length}")
    return length.bit_length() - 1


def _check_dimension(n: int) -> None:
    if n > settings.dimension_cap:
        raise ResourceError(
            f"dimension {n} exceeds the cap of {settings.dimension_cap}"
        )


def synthesize_batch(n: int, coeffs: ArrayLike) -> ComplexArray:
    """Values of a batch of coefficient vectors (last axis has length 2^n)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    return _butterfly(c * _sign_twist(n))


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """Immutable f = Σ_S a_S w_S on the n-dimensional cube."""

    n: int
    coeffs: ComplexArray = field(repr=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInputError(f"dimension must be nonnegative, got {self.n}")
        _check_dimension(self.n)
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if c.shape[0] != 1 << self.n:
            raise InvalidInputError(
                f"expected {1 << self.n} coefficients for n={self.n}, got {c.shape[0]}"
            )
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(popcounts(self.n)[nz].max()) if nz.size else 0

    def is_real(self) -> bool:
        return bool(np.all(np.abs(synthesize(self).imag) < REAL_TOLERANCE))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _with(self, coeffs: ArrayLike) -> CubeFunction:
        return CubeFunction(self.n, np.asarray(coeffs))


# --- Constructors --------------------------------------------------------------


def constant(n: int, c: complex = 1.0) -> CubeFunction:
    coeffs = np.zeros(1 << n, dtype=np.complex128)
    coeffs[0] = c
    return CubeFunction(n, coeffs)


def character(n: int, subset: int) -> CubeFunction:
    """The Walsh character w_S for the bitmask ``subset``."""
    if not 0 <= subset < 1 << n:
        raise InvalidInputError(f"subset mask {subset} out of range for n={n}")
    coeffs = np.zeros(1 << n, dtype=np.complex128)
    coeffs[subset] = 1.0
    return CubeFunction(n, coeffs)


def random_function(
    n: int,
    rng: np.random.Generator,
    degree: int | None = None,
    real: bool = False,
) -> CubeFunction:
    """Gaussian random coefficients, optionally truncated to |S| <= degree."""
    size = 1 << n
    coeffs = rng.standard_normal(size).astype(np.complex128)
    if not real:
        coeffs += 1j * rng.standard_normal(size)
    if degree is not None:
        coeffs[popcounts(n) > degree] = 0.0
    return CubeFunction(n, coeffs)


# --- Transforms ----------------------------------------------------------------


def analyze(values: ArrayLike) -> CubeFunction:
    """Fourier–Walsh coefficients a_S = E f w_S of a table of 2^n values."""
    v = np.asarray(values, dtype=np.complex128).reshape(-1)
    n = _dimension_of(v.shape[0])
    _check_dimension(n)
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("values must be finite")
    coeffs = _butterfly(v) * _sign_twist(n) / v.shape[0]
    return CubeFunction(n, coeffs)


def synthesize(f: CubeFunction) -> ComplexArray:
    """Values f(x_b) for every vertex index b."""
    return synthesize_batch(f.n, f.coeffs)


def lp_norm(f: CubeFunction, p: float) -> float:
    if not p >= 1:
        raise InvalidInputError(f"p must be at least 1, got {p}")
    values = np.abs(synthesize(f))
    return float(np.mean(values**p) ** (1.0 / p))


def inner_product(f: CubeFunction, g: CubeFunction) -> complex:
    """E f·conj(g), computed on the coefficient side."""
    if f.n != g.n:
        raise InvalidInputError(f"dimension mismatch: {f.n} vs {g.n}")
    return complex(np.sum(f.coeffs * np.conj(g.coeffs)))


# --- Operators -----------------------------------------------------------------


def multiplier_table(n: int, symbol: ArrayLike) -> ComplexArray:
    """Spreads a symbol indexed by |S| over all 2^n bitmasks."""
    return np.asarray(symbol, dtype=np.complex128)[popcounts(n)]


def apply_noise(f: CubeFunction, z: complex) -> CubeFunction:
    """T_z: multiplies a_S by z^{|S|}."""
    z = complex(z)
    powers = np.ones(f.n + 1, dtype=np.complex128)
    for k in range(1, f.n + 1):
        powers[k] = powers[k - 1] * z
    return f._with(f.coeffs * multiplier_table(f.n, powers))


def laplacian(f: CubeFunction) -> CubeFunction:
    return f._with(f.coeffs * popcounts(f.n))


def partial(f: CubeFunction, j: int) -> CubeFunction:
    """D_j f, the half-difference in coordinate j (1-based)."""
    if not 1 <= j <= f.n:
        raise InvalidInputError(f"coordinate {j} out of range 1..{f.n}")
    mask = (np.arange(1 << f.n) >> (j - 1)) & 1
    return f._with(f.coeffs * mask)


def gradient_sq(f: CubeFunction) -> RealArray:
    """Pointwise Σ_j |D_j f|^2; for real f this is Σ_j (D_j f)^2."""
    if not f.is_real():
        logger.warning(
            "gradient_sq called on a complex-valued function (n=%d); "
            "using |D_j f|^2",
            f.n,
        )
    out = np.zeros(1 << f.n, dtype=np.float64)
    for j in range(1, f.n + 1):
        out += np.abs(synthesize(partial(f, j))) ** 2
    return out


def heat(f: CubeFunction, t: float) -> CubeFunction:
    """e^{-tΔ} = T_{e^{-t}}."""
    if not t >= 0:
        raise InvalidInputError(f"heat time must be nonnegative, got {t}")
    return apply_noise(f, np.exp(-t))


def tensor_power(f: CubeFunction, k: int) -> CubeFunction:
    """F(x^1, ..., x^k) = f(x^1)···f(x^k) on the (k·n)-dimensional cube."""
    if k < 1:
        raise InvalidInputError(f"tensor power must be at least 1, got {k}")
    if k * f.n > settings.dimension_cap:
        raise ResourceError(
            f"tensor power {k} of an n={f.n} function needs dimension {k * f.n}, "
            f"cap is {settings.dimension_cap}"
        )
    coeffs = f.coeffs
    for _ in range(k - 1):
        # later copies occupy the higher bits
        coeffs = np.kron(f.coeffs, coeffs)
    return CubeFunction(k * f.n, coeffs)
