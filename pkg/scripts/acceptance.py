"""Run the acceptance-scale checks (full grids, 10^4 restarts) and print a summary."""

import sys
import time
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import numpy as np

from hypercube.log import configure_logging
from hypercube.schemas.moment import MomentProblem
from hypercube.schemas.search import SearchConfig
from hypercube.services import inequalities as ineq
from hypercube.services.cube import random_function
from hypercube.services.lens import (
    alpha,
    boundary_points,
    boundary_radius_closed,
    boundary_radius_inf,
    laplacian_bound,
)
from hypercube.services.multiplier import certify_on_cube, solve
from hypercube.services.oracle import ACCEPT_SLACK, search_violation, tensorization_check
from hypercube.services.scan import get_inequality, scan


def check_main_theorem():
    for p in (2.1, 2.5, 2.9):
        report = scan("reduced", get_inequality("reduced").default_grid({"p": p}))
        yield f"reduced p={p}", report.passed, report.worst_margin


def check_necessity():
    for k, z in enumerate(boundary_points(2.5, 2.5, 8)):
        fixed = {"p": 2.5, "q": 2.5, "z_re": 1.02 * z.real, "z_im": 1.02 * z.imag}
        report = scan("two-point", get_inequality("two-point").default_grid(fixed))
        yield f"two-point 1.02x boundary #{k}", report.worst_margin <= -1e-6, report.worst_margin


def check_mock_logsob():
    for p in (3.0, 3.5, 5.0):
        report = scan("mock-logsob", get_inequality("mock-logsob").default_grid({"p": p}))
        yield f"mock-logsob monotone p={p}", report.passed, report.worst_margin
    for p in (2.3, 2.5, 2.9):
        witness = ineq.mock_logsob_counterexample(p)
        yield f"mock-logsob counterexample p={p}", witness.slope <= -1e-6, witness.slope


def check_cap_and_coefficients():
    report = scan("cap")
    yield "cap", report.passed, report.worst_margin
    x = np.linspace(0.0, np.pi / 2, 200001)
    grid_max = float(np.max(ineq.cap_profile(2, x)))
    yield "cap sup ell=2", abs(grid_max - float(ineq.cap_sup(2))) <= 1e-10, grid_max
    report = scan("coefficient-ratio")
    yield "coefficient ratio", report.passed, report.worst_margin
    yield "a2 = 1/4", ineq.sqrt_series_coefficient(2) == 0.25, 0.25
    report = scan("series")
    yield "series", report.passed, report.worst_margin


def check_oracle():
    cfg = SearchConfig(restarts=10_000, steps=200, seed=0)
    for k, z in enumerate(boundary_points(2.5, 2.5, 16)):
        result = search_violation(2.5, 2.5, z, cfg)
        yield f"search boundary #{k}", result.best_ratio <= 1 + ACCEPT_SLACK, result.best_ratio
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(50):
        n, k = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        worst = max(worst, tensorization_check(random_function(n, rng), k, 2.5, 2.5, 0.7 + 0.3j))
    yield "tensorization", worst <= 1e-10, worst


def check_endgame():
    yield "endgame 3 <= 256/81", ineq.endgame_certificate(), 0.0


def check_multiplier():
    sandwich = solve(MomentProblem.from_values(2.5, 0.5 ** np.arange(7)))
    ok = 1 - 1e-3 <= sandwich.lower and sandwich.upper <= 1 + 1e-2
    yield "geometric r=0.5 d=6", ok, sandwich.gap
    delta = np.zeros(7)
    delta[0] = 1.0
    sandwich = solve(MomentProblem.from_values(2.5, delta))
    yield "delta", abs(sandwich.upper - 1) <= 1e-6 and abs(sandwich.lower - 1) <= 1e-6, sandwich.gap
    for d in (2, 3, 4):
        values = np.arange(d + 1)
        sandwich = solve(MomentProblem.from_values(2.5, values))
        yield f"laplacian d={d}", sandwich.upper <= laplacian_bound(2.5, d), sandwich.upper
        worst = certify_on_cube(sandwich.measure, values, d, 2.5, 2.5, trials=200, n=5)
        yield f"certify laplacian d={d}", worst <= sandwich.upper + 1e-6, worst


def check_geometry():
    t = np.linspace(0.0, np.pi / 2, 256)
    for p in (2.1, 2.5, 2.9, 3.5):
        diff = float(np.max(np.abs(boundary_radius_closed(p, t) - boundary_radius_inf(p, p, t))))
        yield f"boundary forms p={p}", diff <= 1e-9, diff
    gaps = [abs(alpha(p) - alpha(p / (p - 1))) for p in np.linspace(1.05, 12.0, 20)]
    yield "alpha duality", max(gaps) <= 1e-12, max(gaps)


CHECKS = [
    check_main_theorem,
    check_necessity,
    check_mock_logsob,
    check_cap_and_coefficients,
    check_oracle,
    check_endgame,
    check_multiplier,
    check_geometry,
]


def run_all() -> int:
    failures = 0
    for check in CHECKS:
        started = time.perf_counter()
        for name, ok, value in check():
            failures += not ok
            print(f"  [{'ok' if ok else 'FAIL'}] {name}: {value:.6g}")
        print(f"{check.__name__} took {time.perf_counter() - started:.1f}s")
    return failures


if __name__ == "__main__":
    configure_logging("WARNING")
    print("Running acceptance checks...")
    failed = run_all()
    print("Done!" if not failed else f"{failed} check(s) failed")
    sys.exit(1 if failed else 0)
