# src/hypercube/services/multiplier.py
"""Norm bounds for spectral multipliers through a moment problem.

If μ is a measure on the admissible region with ∫ z^j dμ = φ(j) for
j = 0..d, then f ↦ Σ φ(|S|) a_S w_S is bounded from L^p to L^q by the total
variation of μ on functions of degree at most d. The least such constant is
sandwiched between

  lower: |Σ φ(j) a_j| for a polynomial Σ a_j z^j bounded by 1 on the domain,
  upper: Σ |c_k| for an atomic measure Σ c_k δ_{z_k} with the right moments.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy import linalg, sparse
from scipy.optimize import linprog

from hypercube.config import settings
from hypercube.errors import (
    ConsistencyError,
    FeasibilityError,
    InvalidInputError,
    NumericError,
    ResourceError,
)
from hypercube.schemas.moment import (
    AtomicMeasure,
    MomentProblem,
    NormSandwich,
    default_samples,
)
from hypercube.services.cube import (
    CubeFunction,
    lp_norm,
    multiplier_table,
    random_function,
)
from hypercube.services.lens import (
    BOUNDARY_TOLERANCE,
    admissibility_margin,
    boundary_radius,
    lens_params,
)
from hypercube.services.numerics import brent_in_bracket

logger = logging.getLogger(__name__)

ComplexArray = NDArray[np.complex128]

POLYGON_SIDES = 16
PHASES = 64
FINE_FACTOR = 32
MIN_FINE = 4096
IRLS_EPSILONS = np.geomspace(1e-3, 1e-10, 8)
IRLS_INNER = 50
STATIONARITY = 1e-10
MAX_EXCHANGES = 64
PRUNE = 1e-8
PRONY_RANK = 1e-10


def _powers(z: ComplexArray, d: int) -> ComplexArray:
    """Vandermonde rows z^0..z^d, one row per point."""
    return np.asarray(z, dtype=np.complex128)[:, None] ** np.arange(d + 1)


def refinement_levels(prob: MomentProblem) -> list[int]:
    """Nested sample counts ..., M/4, M/2, M down to 8(d+1), coarsest first.

    Both bounds are the best over every level, and the levels of M are a
    prefix of the levels of 2M, so refining the grid cannot worsen either.
    """
    assert prob.M is not None
    floor = 8 * (prob.d + 1)
    levels = [prob.M]
    while levels[-1] % 2 == 0 and levels[-1] // 2 >= floor:
        levels.append(levels[-1] // 2)
    return levels[::-1]


def _at_level(prob: MomentProblem, M: int) -> MomentProblem:
    return prob if M == prob.M else prob.model_copy(update={"M": M})


class _Domain:
    """Sampling of Ω_{p,q} (through its boundary) or of Ω^ℝ = [-ρ, ρ].

    Points are parametrized by one real variable: the polar angle on the
    boundary, or the abscissa on the segment. The fine sampling used for
    sup norms depends on d only, never on M.
    """

    def __init__(self, prob: MomentProblem) -> None:
        assert prob.q is not None and prob.M is not None
        self.p, self.q, self.kind = prob.p, prob.q, prob.domain
        self.rho = lens_params(prob.p, prob.q).real_half_width
        fine = max(MIN_FINE, FINE_FACTOR * default_samples(prob.d))
        if self.kind == "real":
            self.lo, self.hi, self.periodic = -self.rho, self.rho, False
            self.coarse = self.point(np.linspace(self.lo, self.hi, prob.M))
            self.fine_t = np.linspace(self.lo, self.hi, fine | 1)
        else:
            self.lo, self.hi, self.periodic = 0.0, 2 * math.pi, True
            self.coarse = self.point(2 * np.pi * np.arange(prob.M) / prob.M)
            self.fine_t = 2 * np.pi * np.arange(fine) / fine
        self.fine = self.point(self.fine_t)
        self.step = float(self.fine_t[1] - self.fine_t[0])
        self.segment = np.linspace(-self.rho, self.rho, prob.M | 1).astype(np.complex128)

    def point(self, t: NDArray[np.float64]) -> ComplexArray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "real":
            return t.astype(np.complex128)
        r = np.asarray(boundary_radius(self.p, self.q, t), dtype=np.float64)
        return r * np.exp(1j * t)

    def contains(self, z: ComplexArray) -> NDArray[np.bool_]:
        z = np.asarray(z, dtype=np.complex128)
        if self.kind == "real":
            return (np.abs(z.imag) <= BOUNDARY_TOLERANCE) & (
                np.abs(z.real) <= self.rho + BOUNDARY_TOLERANCE
            )
        return admissibility_margin(self.p, self.q, z) >= -BOUNDARY_TOLERANCE

    def maximize(self, coeffs: ComplexArray) -> tuple[complex, float]:
        """Point and value of the largest |Σ a_j z^j| over the domain."""
        values = np.abs(np.polynomial.polynomial.polyval(self.fine, coeffs))
        k = int(np.argmax(values))
        best_z, best_v = complex(self.fine[k]), float(values[k])
        left, right = self.fine_t[k] - self.step, self.fine_t[k] + self.step
        if not self.periodic:
            left, right = max(left, self.lo), min(right, self.hi)
        if right <= left:
            return best_z, best_v

        def objective(t: float) -> float:
            z = self.point(np.array([t]))
            return -float(np.abs(np.polynomial.polynomial.polyval(z, coeffs))[0])

        t, v = brent_in_bracket(objective, left, right)
        if -v > best_v:
            return complex(self.point(np.array([t]))[0]), -v
        return best_z, best_v


# --- Dual side: polynomials bounded by one ----------------------------------------------


def _polygon_rows(points: ComplexArray, d: int) -> NDArray[np.float64]:
    """Re(e^{-iθ}·P(z_m)) <= 1 for 16 angles θ, as rows over (Re a, Im a)."""
    V = _powers(points, d)
    R, I = V.real, V.imag
    blocks = []
    for theta in 2 * np.pi * np.arange(POLYGON_SIDES) / POLYGON_SIDES:
        c, s = math.cos(theta), math.sin(theta)
        blocks.append(np.hstack([c * R + s * I, s * R - c * I]))
    return np.vstack(blocks)


def _dual_on_grid(
    prob: MomentProblem, domain: _Domain
) -> tuple[float, ComplexArray, list[dict[str, Any]]]:
    """Best normalized phase-LP polynomial on one boundary sampling."""
    phi = prob.values
    d = prob.d
    best_value = 0.0
    best = np.zeros(d + 1, dtype=np.complex128)
    A_ub = _polygon_rows(domain.coarse, d)
    b_ub = np.ones(A_ub.shape[0])
    g, h = phi.real, phi.imag
    failed = []
    for psi in 2 * np.pi * np.arange(PHASES) / PHASES:
        c, s = math.cos(psi), math.sin(psi)
        objective = -np.concatenate([c * g + s * h, s * g - c * h])
        res = linprog(objective, A_ub=A_ub, b_ub=b_ub, bounds=(None, None), method="highs")
        if res.status != 0:
            failed.append(
                {
                    "M": prob.M,
                    "phase": float(psi),
                    "status": int(res.status),
                    "message": res.message,
                }
            )
            continue
        a = res.x[: d + 1] + 1j * res.x[d + 1 :]
        _, sup = domain.maximize(a)
        if sup <= 0:
            continue
        value = abs(np.dot(phi, a)) / sup
        if value > best_value:
            best_value, best = value, a / sup
    return float(best_value), best, failed


def dual_lower_bound(prob: MomentProblem) -> tuple[float, ComplexArray]:
    """max |Σ φ(j)a_j| over polynomials with sup |Σ a_j z^j| <= 1 on the domain.

    The modulus is linearized by fixing the objective's phase on a grid of
    64 angles and replacing each pointwise |P(z_m)| <= 1 by a 16-gon. Each
    phase candidate is divided by its sup over a fine sampling of the domain,
    so every value reported is attained by an admissible polynomial. The LPs
    are solved on every level of `refinement_levels` and the best candidate
    is kept.

    Returns (lower bound, a_0..a_d).
    """
    phi = prob.values
    d = prob.d
    best_value = abs(phi[0])
    best = np.zeros(d + 1, dtype=np.complex128)
    best[0] = 1.0
    if d == 0:
        return best_value, best

    levels = refinement_levels(prob)
    failed: list[dict[str, Any]] = []
    for M in levels:
        level = _at_level(prob, M)
        value, a, level_failed = _dual_on_grid(level, _Domain(level))
        failed.extend(level_failed)
        if value > best_value:
            best_value, best = value, a
    if len(failed) == PHASES * len(levels):
        raise NumericError("every phase subproblem failed", {"phases": failed})
    if failed:
        logger.warning(
            "dual bound: %d of %d phase LPs failed", len(failed), PHASES * len(levels)
        )
    logger.debug("dual lower bound %.10f (d=%d, M=%s)", best_value, d, prob.M)
    return float(best_value), best


# --- Primal side: atomic measures ----------------------------------------------------


def _prony_nodes(phi: ComplexArray) -> ComplexArray:
    """Nodes of the matrix pencil of the Hankel matrices of φ."""
    N = len(phi)
    if N < 2:
        return np.zeros(0, dtype=np.complex128)
    L = N // 2
    H = np.array([phi[i : i + L + 1] for i in range(N - L)])
    U, sv, Vh = linalg.svd(H[:, :-1], full_matrices=False)
    if sv[0] == 0.0:
        return np.zeros(0, dtype=np.complex128)
    rank = int(np.sum(sv > PRONY_RANK * sv[0]))
    U, sv, Vh = U[:, :rank], sv[:rank], Vh[:rank]
    pencil = (U.conj().T @ H[:, 1:] @ Vh.conj().T) / sv[:, None]
    return linalg.eigvals(pencil)


def _admissible_nodes(prob: MomentProblem, domain: _Domain) -> ComplexArray:
    nodes = _prony_nodes(prob.values)
    if domain.kind == "real":
        nodes = nodes[np.abs(nodes.imag) <= BOUNDARY_TOLERANCE].real.astype(np.complex128)
    return nodes[domain.contains(nodes)]


def _candidates(nodes: ComplexArray, domain: _Domain) -> ComplexArray:
    parts = [nodes, np.zeros(1, dtype=np.complex128), domain.segment]
    if domain.kind == "complex":
        parts.append(domain.coarse)
    return np.unique(np.concatenate(parts))


def _polygon_support(prob: MomentProblem, candidates: ComplexArray) -> ComplexArray:
    """Support of the least polygonal-TV measure on the candidate atoms.

    Variables are (Re c_k, Im c_k, τ_k) with τ_k above every 16-gon facet.
    """
    K = len(candidates)
    d = prob.d
    phi = prob.values
    Vt = _powers(candidates, d).T
    eye = sparse.identity(K, format="csr")
    facets = []
    for theta in 2 * np.pi * np.arange(POLYGON_SIDES) / POLYGON_SIDES:
        facets.append(sparse.hstack([math.cos(theta) * eye, math.sin(theta) * eye, -eye]))
    A_ub = sparse.vstack(facets, format="csr")
    zeros = np.zeros((d + 1, K))
    A_eq = np.block([[Vt.real, -Vt.imag, zeros], [Vt.imag, Vt.real, zeros]])
    b_eq = np.concatenate([phi.real, phi.imag])
    cost = np.concatenate([np.zeros(2 * K), np.ones(K)])
    bounds = [(None, None)] * (2 * K) + [(0, None)] * K
    res = linprog(
        cost,
        A_ub=A_ub,
        b_ub=np.zeros(A_ub.shape[0]),
        A_eq=A_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
    )
    if res.status == 2:
        raise FeasibilityError(
            f"moments are infeasible on {K} candidate atoms; try a larger M",
            {"M": prob.M, "candidates": K, "message": res.message},
        )
    if res.status != 0:
        raise NumericError(
            "polygonal support LP failed", {"status": int(res.status), "message": res.message}
        )
    c = np.abs(res.x[:K] + 1j * res.x[K : 2 * K])
    order = np.argsort(-c, kind="stable")
    keep = order[c[order] > 1e-9 * c.max()][: 2 * (d + 1) + 1]
    return candidates[keep]


def _irls(V: ComplexArray, phi: ComplexArray, scale: float) -> tuple[ComplexArray, ComplexArray]:
    """Least-TV weights with V c = φ by reweighted least squares.

    V has shape (d+1, K). Returns (weights, multipliers λ) with
    c = D Vᴴ λ and D = √(|c|² + ε²) at the last ε.
    """
    c = linalg.lstsq(V, phi)[0]
    lam = np.zeros(V.shape[0], dtype=np.complex128)
    for eps in IRLS_EPSILONS * scale:
        for _ in range(IRLS_INNER):
            D = np.sqrt(np.abs(c) ** 2 + eps**2)
            gram = (V * D) @ V.conj().T
            lam = linalg.lstsq(gram, phi)[0]
            new = D * (V.conj().T @ lam)
            moved = float(np.max(np.abs(new - c)))
            c = new
            if moved <= STATIONARITY * scale:
                break
    return c, lam


def _residual(V: ComplexArray, c: ComplexArray, phi: ComplexArray) -> float:
    return float(np.max(np.abs(V @ c - phi)))


def _pruned(
    support: ComplexArray, c: ComplexArray, phi: ComplexArray, d: int, feasibility: float
) -> tuple[ComplexArray, ComplexArray]:
    """Drop negligible atoms and re-fit the rest, if the moments still match."""
    keep = np.abs(c) > PRUNE * max(float(np.sum(np.abs(c))), 1.0)
    if keep.all() or not keep.any():
        return support, c
    V = _powers(support[keep], d).T
    kept = c[keep] + linalg.lstsq(V, phi - V @ c[keep])[0]
    if _residual(V, kept, phi) <= feasibility:
        return support[keep], kept
    return support, c


def _primal_on_grid(
    prob: MomentProblem, domain: _Domain, seed: ComplexArray
) -> tuple[ComplexArray, ComplexArray, float]:
    """Exchange loop on one sampling, started from `seed` atoms.

    Returns (support, weights, certificate) of the best feasible measure.
    """
    d = prob.d
    phi = prob.values
    tol = prob.tolerances
    scale = max(1.0, float(np.max(np.abs(phi))))
    nodes = _admissible_nodes(prob, domain)
    seed = seed[domain.contains(seed)]
    # pencil nodes stay in the support: a geometric φ is represented exactly there
    start = np.concatenate([nodes, seed])
    support = np.unique(np.concatenate([start, _polygon_support(prob, _candidates(start, domain))]))

    best: tuple[float, ComplexArray, ComplexArray] | None = None
    certificate = abs(phi[0])
    for it in range(MAX_EXCHANGES):
        V = _powers(support, d).T
        c, lam = _irls(V, phi, scale)
        c = c + linalg.lstsq(V, phi - V @ c)[0]
        tv = float(np.sum(np.abs(c)))
        if _residual(V, c, phi) <= tol.feasibility and (best is None or tv < best[0]):
            best = (tv, support.copy(), c.copy())

        # Q(z) = Σ conj(λ_j) z^j
        q_coeffs = lam.conj()
        z_star, q_max = domain.maximize(q_coeffs)
        if q_max > 0:
            certificate = max(certificate, abs(np.dot(phi, q_coeffs)) / q_max)
        logger.debug(
            "M=%s exchange %d: %d atoms, tv=%.12f, max|Q|=%.12f, certificate=%.12f",
            prob.M,
            it,
            len(support),
            tv,
            q_max,
            certificate,
        )
        if best is not None and best[0] - certificate <= tol.gap:
            break
        if best is not None and q_max <= 1.0 + tol.gap:
            break
        if np.min(np.abs(support - z_star)) <= 1e-12:
            break
        weights = np.abs(c)
        drop = weights <= PRUNE * max(tv, 1.0)
        while drop.any() and len(support) - int(drop.sum()) < d + 1:
            drop[np.flatnonzero(drop)[-1]] = False
        support = np.append(support[~drop], z_star)
    else:
        logger.warning("atom exchange stopped after %d rounds (M=%s)", MAX_EXCHANGES, prob.M)

    if best is None:
        raise FeasibilityError(
            "no measure met the moment tolerance; try a larger M",
            {"M": prob.M, "feasibility": tol.feasibility, "atoms": len(support)},
        )
    _, support, c = best
    support, c = _pruned(support, c, phi, d, tol.feasibility)
    return support, c, float(certificate)


def primal_measure(prob: MomentProblem) -> AtomicMeasure:
    """Atomic measure of small total variation with the prescribed moments.

    On each level of `refinement_levels` the exchange loop starts from the
    support of a polygonal LP over candidate atoms (plus the previous level's
    atoms), then alternates reweighted least-squares solves with insertion of
    the point where the dual certificate |Q| is largest. The measure of least
    total variation over all levels is returned, with the largest certificate.
    """
    d = prob.d
    phi = prob.values
    seed = np.zeros(0, dtype=np.complex128)
    best: tuple[float, ComplexArray, ComplexArray] | None = None
    certificate = abs(phi[0])
    error: NumericError | None = None
    for M in refinement_levels(prob):
        level = _at_level(prob, M)
        try:
            support, c, level_certificate = _primal_on_grid(level, _Domain(level), seed)
        except NumericError as exc:
            logger.debug("primal level M=%d failed: %s", M, exc)
            error = exc
            continue
        certificate = max(certificate, level_certificate)
        tv = float(np.sum(np.abs(c)))
        if best is None or tv < best[0]:
            best = (tv, support, c)
        seed = best[1]

    if best is None:
        assert error is not None
        raise error
    tv, support, c = best
    V = _powers(support, d).T
    return AtomicMeasure(
        atoms=[
            (float(z.real), float(z.imag), float(w.real), float(w.imag))
            for z, w in zip(support, c)
        ],
        tv_norm=tv,
        residual=_residual(V, c, phi),
        certificate=float(certificate),
    )


def solve(prob: MomentProblem) -> NormSandwich:
    lower, dual = dual_lower_bound(prob)
    measure = primal_measure(prob)
    if measure.certificate is not None and measure.certificate > lower:
        lower = measure.certificate
    upper = measure.tv_norm
    if lower > upper + prob.tolerances.gap:
        raise ConsistencyError(
            "dual lower bound exceeds the primal upper bound",
            {"lower": lower, "upper": upper, "M": prob.M},
        )
    logger.info(
        "moment problem d=%d p=%g q=%g (%s): %.10f <= C <= %.10f",
        prob.d,
        prob.p,
        prob.q,
        prob.domain,
        lower,
        upper,
    )
    return NormSandwich(
        lower=lower,
        upper=upper,
        measure=measure,
        dual=[(float(a.real), float(a.imag)) for a in dual],
    )


# --- Cube side ---------------------------------------------------------------------


def apply_multiplier(f: CubeFunction, phi: Any, d: int) -> CubeFunction:
    """a_S ↦ φ(|S|)·a_S for a function of degree at most d."""
    values = np.asarray(phi, dtype=np.complex128).reshape(-1)
    if len(values) < d + 1:
        raise InvalidInputError(f"need {d + 1} multiplier values, got {len(values)}")
    if f.degree > d:
        raise InvalidInputError(f"function has degree {f.degree}, multiplier covers {d}")
    symbol = np.zeros(f.n + 1, dtype=np.complex128)
    top = min(d, f.n)
    symbol[: top + 1] = values[: top + 1]
    return f._with(f.coeffs * multiplier_table(f.n, symbol))


def certify_on_cube(
    measure: AtomicMeasure,
    phi: Any,
    d: int,
    p: float,
    q: float,
    trials: int = 200,
    n: int = 5,
    seed: int = 0,
) -> float:
    """Largest ‖φ(f)‖_q / ‖f‖_p over random complex f of degree <= d."""
    if n > settings.certify_dimension_cap:
        raise ResourceError(
            f"certify dimension {n} exceeds the cap of {settings.certify_dimension_cap}"
        )
    if trials < 1:
        raise InvalidInputError(f"need at least one trial, got {trials}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_function(n, rng, degree=min(d, n))
        if f.is_zero():
            continue
        ratio = lp_norm(apply_multiplier(f, phi, d), q) / lp_norm(f, p)
        worst = max(worst, ratio)
    if worst > measure.tv_norm + 1e-6:
        logger.warning("cube ratio %.10f exceeds the measure bound %.10f", worst, measure.tv_norm)
    return worst


# --- Files --------------------------------------------------------------------------


def load_problem(path: str | Path) -> MomentProblem:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInputError(f"cannot read problem file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path} is not valid JSON: {exc}") from exc
    return MomentProblem.model_validate(raw)


def dump_solution(sandwich: NormSandwich, measure: AtomicMeasure | None = None) -> dict:
    """{schema, lower, upper, gap, atoms: [[re, im, wre, wim], ...]}."""
    measure = measure or sandwich.measure
    return {
        "schema": sandwich.schema_version,
        "lower": sandwich.lower,
        "upper": sandwich.upper,
        "gap": sandwich.gap,
        "atoms": [list(a) for a in measure.atoms] if measure else [],
        "residual": measure.residual if measure else None,
        "dual": [list(a) for a in sandwich.dual],
    }
