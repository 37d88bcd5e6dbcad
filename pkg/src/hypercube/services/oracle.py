# src/hypercube/services/oracle.py
"""Search for violations of ‖T_z f‖_q <= ‖f‖_p on small cubes.

For n = 1 the search runs over f = 1 + w·x₁ (the ratio is scale invariant,
so this is every function up to the f = x₁ limit). For larger n it runs over
all 2^n complex coefficients, rescaled to ‖f‖_p = 1 after every accepted
step.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from hypercube.config import settings
from hypercube.errors import InvalidInputError, ResourceError
from hypercube.schemas.search import SearchConfig, SearchResult, encode_coefficients
from hypercube.services.cube import (
    CubeFunction,
    apply_noise,
    lp_norm,
    multiplier_table,
    synthesize,
    synthesize_batch,
    tensor_power,
)

logger = logging.getLogger(__name__)

# a ratio counts as a violation only above 1 + ACCEPT_SLACK
ACCEPT_SLACK = 1e-8
NOISE_BUDGET = 64 * 2**20
STEP_FLOOR = 1e-3


def _check_exponents(p: float, q: float) -> None:
    if not 1 <= p <= q:
        raise InvalidInputError(f"need 1 <= p <= q, got p={p}, q={q}")


def norm_ratio(f: CubeFunction, p: float, q: float, z: complex) -> float:
    """‖T_z f‖_q / ‖f‖_p."""
    if f.is_zero():
        raise InvalidInputError("norm ratio of the zero function is undefined")
    return lp_norm(apply_noise(f, z), q) / lp_norm(f, p)


# --- Random-restart hill climbing ------------------------------------------------------


def _noise_powers(n: int, z: complex) -> np.ndarray:
    return multiplier_table(n, complex(z) ** np.arange(n + 1))


def _batch_norms(n: int, coeffs: np.ndarray, p: float) -> np.ndarray:
    values = np.abs(synthesize_batch(n, coeffs))
    return np.mean(values**p, axis=-1) ** (1.0 / p)


def _batch_ratios(
    n: int, coeffs: np.ndarray, p: float, q: float, powers: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    norm_p = _batch_norms(n, coeffs, p)
    norm_q = _batch_norms(n, coeffs * powers, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(norm_p > 0, norm_q / norm_p, -np.inf)
    return ratio, norm_p


def _as_complex(g: np.ndarray) -> np.ndarray:
    half = g.shape[-1] // 2
    return (g[..., :half] + 1j * g[..., half:]) / math.sqrt(2.0)


def _climb(
    n: int,
    p: float,
    q: float,
    powers: np.ndarray,
    cfg: SearchConfig,
    indices: range,
) -> tuple[np.ndarray, np.ndarray]:
    """Hill-climb one batch of restarts; returns (ratios, coefficients)."""
    size = 1 << n
    dims = 2 if n == 1 else 2 * size
    # each restart owns its stream, so batching does not change its path
    noise = np.stack(
        [
            np.random.default_rng([cfg.seed, i]).standard_normal((cfg.steps + 1, dims))
            for i in indices
        ]
    )
    start = _as_complex(noise[:, 0])
    if n == 1:
        coeffs = np.ones((len(indices), 2), dtype=np.complex128)
        coeffs[:, 1] = start[:, 0]
        free = slice(1, 2)
    else:
        coeffs = start
        free = slice(0, size)
    ratio, norm = _batch_ratios(n, coeffs, p, q, powers)
    if n > 1:
        coeffs = coeffs / norm[:, None]

    sigma = np.full(len(indices), cfg.initial_step)
    rejects = np.zeros(len(indices), dtype=np.int64)
    for k in range(1, cfg.steps + 1):
        step = _as_complex(noise[:, k])
        trial = coeffs.copy()
        moving = coeffs[:, free]
        trial[:, free] = moving + sigma[:, None] * (np.abs(moving) + STEP_FLOOR) * step
        t_ratio, t_norm = _batch_ratios(n, trial, p, q, powers)
        if n > 1:
            trial = trial / np.where(t_norm > 0, t_norm, 1.0)[:, None]
        better = t_ratio > ratio
        coeffs = np.where(better[:, None], trial, coeffs)
        ratio = np.where(better, t_ratio, ratio)
        rejects = np.where(better, 0, rejects + 1)
        stalled = rejects >= cfg.plateau
        sigma = np.where(stalled, np.maximum(sigma * cfg.decay, cfg.min_step), sigma)
        rejects[stalled] = 0
    return ratio, coeffs


def _batch_size(cfg: SearchConfig) -> int:
    if cfg.batch_size is not None:
        return cfg.batch_size
    dims = 2 if cfg.n == 1 else 2 << cfg.n
    per_restart = (cfg.steps + 1) * dims * 8
    return max(1, min(cfg.restarts, NOISE_BUDGET // per_restart))


def search_violation(
    p: float, q: float, z: complex, cfg: SearchConfig | None = None
) -> SearchResult:
    """Maximize norm_ratio by random-restart hill climbing.

    Restart i draws all of its randomness from ``default_rng([seed, i])``,
    so the result depends on the seed only, not on batching or workers.
    """
    _check_exponents(p, q)
    cfg = cfg or SearchConfig(seed=settings.seed)
    if cfg.n > settings.search_dimension_cap:
        raise ResourceError(
            f"search dimension {cfg.n} exceeds the cap of {settings.search_dimension_cap}"
        )
    z = complex(z)
    started = time.perf_counter()
    powers = _noise_powers(cfg.n, z)
    batch = _batch_size(cfg)
    batches = [range(i, min(i + batch, cfg.restarts)) for i in range(0, cfg.restarts, batch)]
    workers = cfg.workers or settings.threads

    def run(indices: range) -> tuple[np.ndarray, np.ndarray]:
        return _climb(cfg.n, p, q, powers, cfg, indices)

    if workers > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, batches))
    else:
        results = [run(b) for b in batches]

    ratios = np.concatenate([r for r, _ in results])
    coeffs = np.concatenate([c for _, c in results])
    best = int(np.argmax(ratios))
    best_ratio = float(ratios[best])
    result = SearchResult(
        p=p,
        q=q,
        z=(z.real, z.imag),
        n=cfg.n,
        best_ratio=best_ratio,
        restart=best,
        evaluations=cfg.restarts * (cfg.steps + 1),
        violation=best_ratio > 1.0 + ACCEPT_SLACK,
        witness=encode_coefficients(coeffs[best]),
        config=cfg,
        seconds=time.perf_counter() - started,
    )
    logger.info(
        "search p=%g q=%g z=%s n=%d: best ratio %.12f at restart %d%s",
        p,
        q,
        z,
        cfg.n,
        best_ratio,
        best,
        " (violation)" if result.violation else "",
    )
    return result


def witness_function(result: SearchResult) -> CubeFunction:
    return CubeFunction(result.n, result.coefficients)


# --- Tensorization and the induction step ---------------------------------------------


def tensorization_check(f: CubeFunction, k: int, p: float, q: float, z: complex) -> float:
    """|ratio(f^{⊗k}) - ratio(f)^k|; the ratio is multiplicative under tensoring."""
    F = tensor_power(f, k)
    return abs(norm_ratio(F, p, q, z) - norm_ratio(f, p, q, z) ** k)


class InductionChain(NamedTuple):
    """‖T_z f‖_q^p <= Q1 <= Q2 <= E|f|^p with f = A + x₁·B."""

    q0: float
    q1: float
    q2: float
    q3: float


def induction_chain(f: CubeFunction, p: float, q: float, z: complex) -> InductionChain:
    if f.n < 2:
        raise InvalidInputError(f"the induction step needs n >= 2, got n={f.n}")
    _check_exponents(p, q)
    m = f.n - 1
    powers = _noise_powers(m, z)
    # bit 0 is x₁: even masks hold A, odd masks hold B
    A = synthesize_batch(m, f.coeffs[0::2] * powers)
    B = synthesize_batch(m, f.coeffs[1::2] * powers)
    zB = complex(z) * B
    plus, minus = np.abs(A + B), np.abs(A - B)

    q0 = np.mean((np.abs(A + zB) ** q + np.abs(A - zB) ** q) / 2) ** (p / q)
    q1 = np.mean(((plus**p + minus**p) / 2) ** (q / p)) ** (p / q)
    q2 = (np.mean(plus**q) ** (p / q) + np.mean(minus**q) ** (p / q)) / 2
    q3 = np.mean(np.abs(synthesize(f)) ** p)
    return InductionChain(float(q0), float(q1), float(q2), float(q3))


def induction_step_check(f: CubeFunction, p: float, q: float, z: complex) -> float:
    """min(Q1 - Q0, Q2 - Q1): the two-point step and the Minkowski step."""
    chain = induction_chain(f, p, q, z)
    return min(chain.q1 - chain.q0, chain.q2 - chain.q1)
