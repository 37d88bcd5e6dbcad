# src/hypercube/services/scan.py
"""Grid scans of the inequality margins.

Each registered inequality names its parameters, the domain on which it is
claimed, any derived quantities that belong in a witness, and the outcome a
scan is expected to produce. ``scan`` evaluates the margin over a Cartesian
grid, zooms in around the worst point, and reports.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from hypercube.config import settings
from hypercube.errors import InvalidInputError, NumericError
from hypercube.schemas.verification import GridAxis, GridSpec, VerificationReport
from hypercube.services import inequalities as ineq
from hypercube.services.lens import c_of_t, is_admissible

logger = logging.getLogger(__name__)

Params = dict[str, Any]

CHUNK_POINTS = 1 << 16
ZOOM_POINTS = 9
MAX_ZOOM_ROUNDS = 40
ANGLE_SLACK = 1e-15


@dataclass(frozen=True)
class Inequality:
    id: str
    summary: str
    parameters: tuple[str, ...]
    margin: Callable[[Params], np.ndarray]
    default_axes: Callable[[Params], list[GridAxis]]
    defaults: Mapping[str, float] = field(default_factory=dict)
    check: Callable[[Params], None] | None = None
    derived: Callable[[Params], Params] | None = None
    domain: Callable[[Params], np.ndarray] | None = None
    uncertainty: Callable[[Params], np.ndarray] | None = None
    expected: Callable[[Params], bool] = lambda fixed: True
    tolerance: float | None = None

    def default_grid(self, fixed: Mapping[str, float] | None = None, **kw: Any) -> GridSpec:
        fixed = dict(fixed or {})
        full = {**self.defaults, **fixed}
        axes = [a for a in self.default_axes(full) if a.name not in fixed]
        return GridSpec(axes=axes, fixed=fixed, **kw)


# --- Parameter helpers -------------------------------------------------------------


def _axis(name: str, lo: float, hi: float, count: int, integer: bool = False) -> GridAxis:
    return GridAxis(name=name, min=lo, max=hi, count=count, integer=integer)


def _z(params: Params) -> complex:
    return complex(params["z_re"], params["z_im"])


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidInputError(message)


def _check_lens_p(params: Params) -> None:
    _need(2 <= params["p"], f"need p >= 2, got p={params['p']}")


def _check_s(params: Params) -> None:
    s = np.asarray(params["s"])
    _need(bool(np.all((s > 1) & (s <= 1.5))), "need s in (1, 3/2]")


def _check_mid_p(params: Params) -> None:
    _need(2 < params["p"] < 3, f"need 2 < p < 3, got p={params['p']}")


def _lens_derived(params: Params) -> Params:
    return {"s": params["p"] / 2.0, "c": c_of_t(params["p"], params["t"])}


def _angles_ok(params: Params) -> np.ndarray:
    return params["a"] + params["t"] <= math.pi / 2 + ANGLE_SLACK


def _reduced_ok(params: Params) -> np.ndarray:
    return _angles_ok(params) & (params["c"] * params["y"] <= 1.0)


def _reduced_axes(params: Params) -> list[GridAxis]:
    return [
        _axis("a", 0.0, math.pi / 2, 32),
        _axis("t", 0.0, math.pi / 2, 32),
        _axis("y", 0.0, 1.0, 32),
    ]


def _two_point_expected(params: Params) -> bool:
    return is_admissible(params["p"], params["q"], _z(params))


def _chain_derived(params: Params) -> Params:
    s = params["s"]
    C = 1.0 + params["k"] * (2.0 * s - 2.0)
    return {"C": C, "t": ineq.chain_angle(s, C)}


def _mock_logsob_axes(params: Params) -> list[GridAxis]:
    h = params["h"]
    return [_axis("x", 0.1, 5.0, 50), _axis("theta", 0.0, math.pi / 2 - h, 256)]


REGISTRY: dict[str, Inequality] = {}


def register(entry: Inequality) -> Inequality:
    REGISTRY[entry.id] = entry
    return entry


register(
    Inequality(
        id="two-point",
        summary="two-point inequality at (p, q, z) over w = rho·e^{i·phi}",
        parameters=("p", "q", "z_re", "z_im", "rho", "phi"),
        margin=lambda v: ineq.two_point_margin(
            v["p"], v["q"], _z(v), v["rho"] * np.exp(1j * v["phi"])
        ),
        default_axes=lambda v: [
            _axis("rho", 0.0, 0.2, 100),
            _axis("phi", 0.0, 2 * math.pi, 100),
        ],
        check=lambda v: _need(1 <= v["p"] <= v["q"], "need 1 <= p <= q"),
        expected=_two_point_expected,
    )
)

register(
    Inequality(
        id="necessity",
        summary="infinitesimal two-point inequality over unit v = e^{i·theta}",
        parameters=("p", "q", "z_re", "z_im", "theta"),
        margin=lambda v: ineq.necessity_margin(
            v["p"], v["q"], _z(v), np.exp(1j * v["theta"])
        ),
        default_axes=lambda v: [_axis("theta", 0.0, math.pi, 720)],
        check=lambda v: _need(1 <= v["p"] <= v["q"], "need 1 <= p <= q"),
        expected=_two_point_expected,
    )
)

register(
    Inequality(
        id="reduced",
        summary="reduced two-point inequality with c = c(t) on the lens boundary",
        parameters=("p", "a", "t", "y"),
        margin=lambda v: ineq.reduced_margin_values(v["s"], v["c"], v["a"], v["t"], v["y"]),
        default_axes=_reduced_axes,
        check=_check_lens_p,
        derived=_lens_derived,
        domain=_reduced_ok,
    )
)

register(
    Inequality(
        id="mock-logsob",
        summary="forward-difference slope of the mock log-Sobolev map in theta",
        parameters=("p", "x", "theta", "h"),
        margin=lambda v: ineq.mock_logsob_slope(v["p"], v["x"], v["theta"], v["h"]),
        default_axes=_mock_logsob_axes,
        defaults={"h": math.pi / 2 / 256},
        check=lambda v: _need(v["p"] > 2 and v["h"] > 0, "need p > 2 and h > 0"),
        expected=lambda v: v["p"] >= 3,
        tolerance=1e-9,
    )
)

register(
    Inequality(
        id="series",
        summary="quartic series bound against its truncation at L terms",
        parameters=("s", "a", "t", "y", "L"),
        margin=lambda v: ineq.series_bound_margin(v["s"], v["a"], v["t"], v["y"], int(v["L"])),
        default_axes=lambda v: [
            _axis("a", 0.0, math.pi / 2, 32),
            _axis("t", 0.0, math.pi / 2, 32),
            _axis("y", 0.0, 3.0, 32),
        ],
        defaults={"s": 1.25, "L": ineq.DEFAULT_TRUNCATION},
        check=_check_s,
        domain=_angles_ok,
        uncertainty=lambda v: ineq.series_tail_bound(v["s"], v["t"], v["y"], int(v["L"])),
    )
)

register(
    Inequality(
        id="cap",
        summary="sliding-window integral of cos^{2l-1}x·sin x against the cosine cap",
        parameters=("ell", "a", "t"),
        margin=lambda v: ineq.cap_integral_margin(v["ell"], v["a"], v["t"]),
        default_axes=lambda v: [
            _axis("ell", 2, 12, 11, integer=True),
            _axis("a", 0.0, math.pi / 2, 64),
            _axis("t", 0.0, math.pi / 2, 64),
        ],
        domain=_angles_ok,
        tolerance=1e-12,
    )
)

register(
    Inequality(
        id="coefficient-ratio",
        summary="ratio bound b_{l+1}/b_l <= (l-1/2)/(l+1)",
        parameters=("ell", "s"),
        margin=lambda v: ineq.coefficient_ratio_check(v["ell"], v["s"]),
        default_axes=lambda v: [
            _axis("ell", 2, 64, 63, integer=True),
            _axis("s", 1.01, 1.49, 3),
        ],
        check=_check_s,
    )
)

register(
    Inequality(
        id="final-chain",
        summary="linear-in-y² endpoint bound with C = c(t)², C = 1 + k(2s-2)",
        parameters=("s", "k", "a"),
        margin=lambda v: ineq.final_chain_margin(v["s"], v["C"], v["a"], v["t"]),
        default_axes=lambda v: [
            _axis("s", 1.01, 1.5, 16),
            _axis("k", 0.0, 1.0, 64),
            _axis("a", 0.0, math.pi / 2, 64),
        ],
        check=_check_s,
        derived=_chain_derived,
        domain=_angles_ok,
    )
)

register(
    Inequality(
        id="self-improvement",
        summary="monotonicity step extending the inequality to c·y > 1",
        parameters=("s", "c", "a", "y"),
        margin=lambda v: ineq.self_improvement_values(v["s"], v["c"], v["a"], v["y"]),
        default_axes=lambda v: [
            _axis("c", 1.0, 2.0, 32),
            _axis("a", 0.0, math.pi, 32),
            _axis("y", 0.5, 20.0, 32),
        ],
        defaults={"s": 1.25},
        check=lambda v: _need(v["s"] > 1, "need s > 1"),
        domain=lambda v: (v["c"] >= 1.0) & (v["c"] * v["y"] > 1.0),
    )
)

register(
    Inequality(
        id="bernoulli",
        summary="sharpened Bernoulli bound with c = c(t) on the lens boundary",
        parameters=("p", "a", "t", "y"),
        margin=lambda v: ineq.bernoulli_margin(v["s"], v["c"], v["a"], v["t"], v["y"]),
        default_axes=_reduced_axes,
        defaults={"p": 2.5},
        check=_check_mid_p,
        derived=_lens_derived,
        domain=_reduced_ok,
    )
)

register(
    Inequality(
        id="quartic",
        summary="quadratic part against the truncated quartic series, c = c(t)",
        parameters=("p", "a", "t", "y", "L"),
        margin=lambda v: ineq.quartic_reduction_margin(
            v["s"], v["c"], v["a"], v["t"], v["y"], int(v["L"])
        ),
        default_axes=_reduced_axes,
        defaults={"p": 2.5, "L": ineq.DEFAULT_TRUNCATION},
        check=_check_mid_p,
        derived=_lens_derived,
        domain=_reduced_ok,
    )
)

register(
    Inequality(
        id="angle-ratio",
        summary="lower estimate of c(t) by the ratio of weights at a and a+t",
        parameters=("p", "a", "t"),
        margin=lambda v: ineq.angle_ratio_margin(v["p"], v["a"], v["t"]),
        default_axes=lambda v: [
            _axis("a", 0.0, math.pi / 2, 64),
            _axis("t", 0.0, math.pi / 2, 64),
        ],
        check=_check_lens_p,
        domain=_angles_ok,
    )
)

register(
    Inequality(
        id="real-two-point",
        summary="real two-point inequality at r = sqrt((p-1)/(q-1))",
        parameters=("p", "q", "a", "b"),
        margin=lambda v: ineq.real_two_point_margin(v["p"], v["q"], v["a"], v["b"]),
        default_axes=lambda v: [
            _axis("a", -2.0, 2.0, 64),
            _axis("b", -2.0, 2.0, 64),
        ],
        check=lambda v: _need(1 < v["p"] <= v["q"], "need 1 < p <= q"),
    )
)


# --- Scan engine -------------------------------------------------------------------


def get_inequality(inequality_id: str) -> Inequality:
    try:
        return REGISTRY[inequality_id]
    except KeyError:
        raise InvalidInputError(
            f"unknown inequality '{inequality_id}'; known: {', '.join(sorted(REGISTRY))}"
        ) from None


def _axis_values(axis: GridAxis) -> np.ndarray:
    values = np.linspace(axis.min, axis.max, axis.count)
    if axis.integer:
        values = np.unique(np.round(values))
    return values


@dataclass
class _Best:
    margin: float = math.inf
    index: int = -1
    point: Params = field(default_factory=dict)
    evaluated: int = 0
    uncertainty: float = 0.0

    def merge(self, other: "_Best") -> None:
        self.evaluated += other.evaluated
        self.uncertainty = max(self.uncertainty, other.uncertainty)
        if (other.margin, other.index) < (self.margin, self.index) or self.index < 0:
            if other.index >= 0:
                self.margin, self.index, self.point = other.margin, other.index, other.point


def _evaluate(
    entry: Inequality, fixed: Params, names: list[str], arrays: list[np.ndarray], offset: int
) -> _Best:
    params: Params = dict(fixed)
    params.update(zip(names, arrays))
    if entry.derived is not None:
        params.update(entry.derived(params))
    shape = arrays[0].shape if arrays else ()
    margins = np.broadcast_to(np.asarray(entry.margin(params), dtype=np.float64), shape)
    mask = (
        np.broadcast_to(np.asarray(entry.domain(params), dtype=bool), shape)
        if entry.domain is not None
        else np.ones(shape, dtype=bool)
    )
    best = _Best(evaluated=int(mask.sum()))
    if best.evaluated == 0:
        return best
    if np.any(np.isnan(margins[mask])):
        raise NumericError(f"{entry.id}: margin is NaN inside the domain", {"fixed": fixed})
    if entry.uncertainty is not None:
        u = np.broadcast_to(np.asarray(entry.uncertainty(params), dtype=np.float64), shape)
        best.uncertainty = float(u[mask].max())
    masked = np.where(mask, margins, np.inf).reshape(-1)
    k = int(np.argmin(masked))
    best.margin = float(masked[k])
    best.index = offset + k
    best.point = {
        key: float(np.broadcast_to(np.asarray(val), shape).reshape(-1)[k])
        for key, val in params.items()
        if np.ndim(val) > 0 or key not in fixed
    }
    return best


def _grid_pass(
    entry: Inequality, fixed: Params, axes: list[GridAxis], workers: int
) -> _Best:
    names = [a.name for a in axes]
    values = [_axis_values(a) for a in axes]
    inner = int(np.prod([len(v) for v in values[1:]])) if len(values) > 1 else 1
    rows = max(1, CHUNK_POINTS // max(inner, 1))
    first = values[0]
    starts = list(range(0, len(first), rows))

    def run(start: int) -> _Best:
        chunk = [first[start : start + rows], *values[1:]]
        arrays = np.meshgrid(*chunk, indexing="ij")
        return _evaluate(entry, fixed, names, arrays, start * inner)

    best = _Best()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]
    for r in results:
        best.merge(r)
    return best


def _zoom(
    entry: Inequality, fixed: Params, axes: list[GridAxis], best: _Best, width: float
) -> tuple[_Best, int]:
    """Repeated 9-point-per-axis zoom around the current worst point."""
    half = {}
    for a in axes:
        if not a.integer and a.count > 1:
            half[a.name] = (a.max - a.min) / (a.count - 1)
    if not half:
        return best, 0
    extra = 0
    for _ in range(MAX_ZOOM_ROUNDS):
        local = []
        for a in axes:
            centre = best.point[a.name]
            if a.name in half:
                lo = max(a.min, centre - half[a.name])
                hi = min(a.max, centre + half[a.name])
                local.append(np.linspace(lo, hi, ZOOM_POINTS))
            else:
                local.append(np.array([centre]))
        arrays = np.meshgrid(*local, indexing="ij")
        # zoom points rank after every grid point when breaking ties
        found = _evaluate(entry, fixed, [a.name for a in axes], arrays, 1 << 62)
        extra += found.evaluated
        if found.index >= 0 and found.margin < best.margin:
            best.margin, best.point = found.margin, found.point
        best.uncertainty = max(best.uncertainty, found.uncertainty)
        for name in half:
            half[name] *= 2.0 / (ZOOM_POINTS - 1)
        if all(2 * h / (ZOOM_POINTS - 1) <= width for h in half.values()):
            break
    return best, extra


def scan(
    inequality_id: str,
    grid: GridSpec | None = None,
    tolerance: float | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """Evaluate a registered margin over a grid and report the worst point."""
    entry = get_inequality(inequality_id)
    grid = grid or entry.default_grid()
    started = time.perf_counter()

    fixed: Params = {**entry.defaults, **grid.fixed}
    names = [a.name for a in grid.axes]
    unknown = (set(names) | set(fixed)) - set(entry.parameters)
    if unknown:
        raise InvalidInputError(f"{entry.id}: unknown parameters {sorted(unknown)}")
    fixed = {k: v for k, v in fixed.items() if k not in names}
    if "q" in entry.parameters and "q" not in fixed and "q" not in names and "p" in fixed:
        fixed["q"] = fixed["p"]
    missing = set(entry.parameters) - set(names) - set(fixed)
    if missing:
        raise InvalidInputError(f"{entry.id}: missing parameters {sorted(missing)}")
    if not grid.axes or any(a.count == 0 for a in grid.axes):
        raise InvalidInputError(f"{entry.id}: empty grid")
    if entry.check is not None:
        probe = {**fixed, **{a.name: a.min for a in grid.axes}}
        entry.check(probe)

    tol = tolerance if tolerance is not None else (entry.tolerance or settings.tolerance)
    workers = workers or settings.threads
    logger.info("scan %s: %s", entry.id, " x ".join(f"{a.name}[{a.count}]" for a in grid.axes))

    best = _grid_pass(entry, fixed, grid.axes, workers)
    if best.index < 0:
        raise InvalidInputError(f"{entry.id}: no grid point lies inside the domain")
    if grid.refine:
        best, extra = _zoom(entry, fixed, grid.axes, best, grid.refine_width)
        best.evaluated += extra

    uncertainty = best.uncertainty if entry.uncertainty is not None else None
    passed = best.margin >= -(tol + (uncertainty or 0.0))
    witness = {**{k: float(v) for k, v in fixed.items()}, **best.point}
    report = VerificationReport(
        inequality=entry.id,
        grid=grid,
        evaluated=best.evaluated,
        worst_margin=best.margin,
        witness=dict(sorted(witness.items())),
        passed=passed,
        expected=entry.expected(fixed),
        tolerance=tol,
        uncertainty=uncertainty,
        note=entry.summary,
        seconds=time.perf_counter() - started,
    )
    logger.info(
        "scan %s: worst margin %.3e over %d points (%s)",
        entry.id,
        best.margin,
        best.evaluated,
        "pass" if passed else "fail",
    )
    return report
