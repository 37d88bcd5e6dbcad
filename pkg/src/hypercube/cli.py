# src/hypercube/cli.py
"""Command-line front end.

Every subcommand turns its arguments into a RunConfig and hands it to
``execute``; ``run CONFIG.json`` replays a stored config.

Exit codes: 0 expected outcome, 2 usage or invalid input, 3 violation or
unexpected outcome, 4 numeric failure.

Examples
--------
  hypercube admissible --p 2.5 --z 1,0
  hypercube boundary --p 2.5 --count 256 --out lens.csv
  hypercube verify reduced --p 2.5 --grid 32
  hypercube search --p 2.5 --z 0.9,0.3 --restarts 1000 --seed 7
  hypercube multiplier --p 2.5 --d 6 --symbol geometric --r 0.5
  hypercube certify --p 2.5 --d 3 --symbol laplacian --n 5 --trials 200
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from hypercube.config import settings
from hypercube.errors import InvalidInputError, NumericError, ResourceError, SearchFailure
from hypercube.log import configure_logging
from hypercube.reports import admissible_report, boundary_rows, emit, to_csv, to_json
from hypercube.schemas.moment import MomentProblem, MomentTolerances
from hypercube.schemas.run import (
    AdmissibleParams,
    BoundaryParams,
    MultiplierParams,
    RunConfig,
    SearchParams,
    VerifyParams,
)
from hypercube.schemas.search import SearchConfig
from hypercube.services import multiplier, oracle, scan

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VIOLATION = 3
EXIT_NUMERIC = 4

# slack allowed between a cube ratio and the measure bound
CERTIFY_SLACK = 1e-6


def parse_complex(text: str) -> tuple[float, float]:
    """``re,im`` (or a bare real) to a pair of floats."""
    parts = text.split(",")
    try:
        values = [float(x) for x in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}") from None
    if len(values) == 1:
        values.append(0.0)
    if len(values) != 2 or not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}")
    return values[0], values[1]


def parse_assignment(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number in {text!r}") from None


# --- Command bodies ------------------------------------------------------------------
#
# Each returns (exit code, text to emit).


def _admissible(cfg: RunConfig) -> tuple[int, str]:
    params = AdmissibleParams.model_validate(cfg.params)
    report = admissible_report(params.p, params.q, complex(*params.z))
    report["config"] = cfg
    return (EXIT_OK if report["admissible"] else EXIT_VIOLATION), to_json(report)


def _boundary(cfg: RunConfig) -> tuple[int, str]:
    params = BoundaryParams.model_validate(cfg.params)
    columns, rows = boundary_rows(params.p, params.q, params.count, params.t_min, params.t_max)
    return EXIT_OK, to_csv(rows, columns)


def _verify(cfg: RunConfig) -> tuple[int, str]:
    params = VerifyParams.model_validate(cfg.params)
    entry = scan.get_inequality(params.inequality)
    grid = entry.default_grid(params.fixed, refine=params.refine)
    axes = []
    for axis in grid.axes:
        update: dict[str, Any] = {}
        if params.grid is not None and not axis.integer:
            update["count"] = params.grid
        if params.lmax is not None and axis.name == "ell":
            update["max"] = float(params.lmax)
            update["count"] = int(params.lmax - axis.min) + 1
        axes.append(axis.model_copy(update=update))
    grid = grid.model_copy(update={"axes": axes})
    report = scan.scan(entry.id, grid, tolerance=cfg.tolerance, workers=cfg.threads)
    payload = report.model_dump(mode="json", by_alias=True)
    if report.passed:
        payload["outcome"] = "pass"
    else:
        payload["outcome"] = "counterexample found"
    payload["config"] = cfg
    return (EXIT_OK if report.as_expected else EXIT_VIOLATION), to_json(payload)


def _search(cfg: RunConfig) -> tuple[int, str]:
    params = SearchParams.model_validate(cfg.params)
    search_cfg = SearchConfig(
        n=params.n,
        restarts=params.restarts,
        steps=params.steps,
        seed=cfg.seed if cfg.seed is not None else settings.seed,
        workers=cfg.threads,
    )
    q = params.p if params.q is None else params.q
    result = oracle.search_violation(params.p, q, complex(*params.z), search_cfg)
    payload = result.model_dump(mode="json", by_alias=True)
    payload["run"] = cfg
    return (EXIT_VIOLATION if result.violation else EXIT_OK), to_json(payload)


def symbol_values(symbol: str, d: int, r: float = 0.5) -> np.ndarray:
    """φ(0..d) for the named symbols."""
    j = np.arange(d + 1, dtype=np.float64)
    table: dict[str, Callable[[], np.ndarray]] = {
        "geometric": lambda: r**j,
        "exp": lambda: np.exp(-r * j),
        "laplacian": lambda: j,
        "identity": lambda: np.ones_like(j),
        "delta": lambda: (j == 0).astype(np.float64),
    }
    if symbol not in table:
        raise InvalidInputError(f"unknown symbol {symbol!r}; known: {', '.join(table)}")
    return table[symbol]().astype(np.complex128)


def _problem(params: MultiplierParams, tolerance: float | None) -> MomentProblem:
    if params.problem is not None:
        prob = multiplier.load_problem(params.problem)
    else:
        if params.p is None or params.d is None:
            raise InvalidInputError("give a problem file or both --p and --d")
        prob = MomentProblem.from_values(
            params.p,
            symbol_values(params.symbol, params.d, params.r),
            q=params.q,
            M=params.M,
            domain=params.domain,
        )
    if tolerance is not None:
        tolerances = MomentTolerances(gap=tolerance, feasibility=prob.tolerances.feasibility)
        prob = prob.model_copy(update={"tolerances": tolerances})
    return prob


def _multiplier(cfg: RunConfig) -> tuple[int, str]:
    params = MultiplierParams.model_validate(cfg.params)
    prob = _problem(params, cfg.tolerance)
    sandwich = multiplier.solve(prob)
    payload = multiplier.dump_solution(sandwich)
    payload["problem"] = prob
    payload["config"] = cfg
    return EXIT_OK, to_json(payload)


def _certify(cfg: RunConfig) -> tuple[int, str]:
    params = MultiplierParams.model_validate(cfg.params)
    prob = _problem(params, cfg.tolerance)
    sandwich = multiplier.solve(prob)
    assert sandwich.measure is not None and prob.q is not None
    worst = multiplier.certify_on_cube(
        sandwich.measure,
        prob.values,
        prob.d,
        prob.p,
        prob.q,
        trials=params.trials,
        n=params.n,
        seed=cfg.seed if cfg.seed is not None else settings.seed,
    )
    within = worst <= sandwich.upper + CERTIFY_SLACK
    payload = multiplier.dump_solution(sandwich)
    payload.update({"worst_ratio": worst, "within_bound": within, "config": cfg})
    return (EXIT_OK if within else EXIT_VIOLATION), to_json(payload)


COMMANDS: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "admissible": _admissible,
    "boundary": _boundary,
    "verify": _verify,
    "search": _search,
    "multiplier": _multiplier,
    "certify": _certify,
}


def execute(cfg: RunConfig) -> int:
    """Run one config, emit its output, and map failures to exit codes."""
    try:
        code, text = COMMANDS[cfg.command](cfg)
    except (InvalidInputError, ResourceError, ValidationError, SearchFailure) as exc:
        logger.error("%s: %s", cfg.command, exc)
        emit(to_json({"schema": 1, "error": str(exc), "config": cfg}), cfg.out)
        return EXIT_USAGE
    except NumericError as exc:
        logger.error("%s: numeric failure: %s", cfg.command, exc)
        payload = {"schema": 1, "error": str(exc), "diagnostics": exc.diagnostics, "config": cfg}
        emit(to_json(payload), cfg.out)
        return EXIT_NUMERIC
    emit(text, cfg.out)
    return code


# --- Argument parsing ------------------------------------------------------------------


def _params(args: argparse.Namespace, names: list[str]) -> dict[str, Any]:
    return {name: getattr(args, name) for name in names if getattr(args, name) is not None}


def _cmd_admissible(args: argparse.Namespace) -> dict[str, Any]:
    return _params(args, ["p", "q", "z"])


def _cmd_boundary(args: argparse.Namespace) -> dict[str, Any]:
    return _params(args, ["p", "q", "count", "t_min", "t_max"])


def _cmd_verify(args: argparse.Namespace) -> dict[str, Any]:
    fixed = dict(args.fix or [])
    for name in ("p", "q", "s", "L"):
        value = getattr(args, name)
        if value is not None:
            fixed[name] = value
    if args.z is not None:
        fixed["z_re"], fixed["z_im"] = args.z
    params = {"inequality": args.inequality, "fixed": fixed, "refine": not args.no_refine}
    params.update(_params(args, ["grid", "lmax"]))
    return params


def _cmd_search(args: argparse.Namespace) -> dict[str, Any]:
    return _params(args, ["p", "q", "z", "n", "restarts", "steps"])


def _cmd_multiplier(args: argparse.Namespace) -> dict[str, Any]:
    return _params(args, ["problem", "p", "q", "d", "symbol", "r", "M", "domain", "n", "trials"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercube",
        description="Complex hypercontractivity checks on the Hamming cube.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--tolerance", type=float, default=None, help="override scan/gap tolerance")
    parser.add_argument("--threads", type=int, default=None, help="worker threads")
    parser.add_argument("--seed", type=int, default=None, help="rng seed (search, certify)")
    parser.add_argument("--out", default=None, help="write output here instead of stdout")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)

    p_adm = sub.add_parser("admissible", help="is z in the admissible region for (p, q)?")
    p_adm.add_argument("--p", type=float, required=True)
    p_adm.add_argument("--q", type=float, default=None, help="defaults to p")
    p_adm.add_argument("--z", type=parse_complex, required=True, help="re,im")
    p_adm.set_defaults(build=_cmd_admissible)

    p_bnd = sub.add_parser("boundary", help="CSV of the polar boundary r(t)")
    p_bnd.add_argument("--p", type=float, required=True)
    p_bnd.add_argument("--q", type=float, default=None, help="defaults to p")
    p_bnd.add_argument("--count", type=int, default=256)
    p_bnd.add_argument("--t-min", dest="t_min", type=float, default=0.0)
    p_bnd.add_argument("--t-max", dest="t_max", type=float, default=math.pi)
    p_bnd.set_defaults(build=_cmd_boundary)

    p_ver = sub.add_parser("verify", help="grid scan of a registered inequality")
    p_ver.add_argument("inequality", choices=sorted(scan.REGISTRY))
    p_ver.add_argument("--p", type=float, default=None)
    p_ver.add_argument("--q", type=float, default=None)
    p_ver.add_argument("--s", type=float, default=None)
    p_ver.add_argument("--L", type=float, default=None, help="series truncation")
    p_ver.add_argument("--z", type=parse_complex, default=None, help="re,im")
    p_ver.add_argument("--fix", type=parse_assignment, action="append", help="NAME=VALUE")
    p_ver.add_argument("--grid", type=int, default=None, help="points per continuous axis")
    p_ver.add_argument("--lmax", type=int, default=None, help="largest ell on integer axes")
    p_ver.add_argument("--no-refine", action="store_true", help="skip zoom refinement")
    p_ver.set_defaults(build=_cmd_verify)

    p_sea = sub.add_parser("search", help="hill-climbing search for ‖T_z f‖_q > ‖f‖_p")
    p_sea.add_argument("--p", type=float, required=True)
    p_sea.add_argument("--q", type=float, default=None, help="defaults to p")
    p_sea.add_argument("--z", type=parse_complex, required=True, help="re,im")
    p_sea.add_argument("--n", type=int, default=1)
    p_sea.add_argument("--restarts", type=int, default=256)
    p_sea.add_argument("--steps", type=int, default=200)
    p_sea.set_defaults(build=_cmd_search)

    for name, help_text in (
        ("multiplier", "bound a spectral multiplier through its moment problem"),
        ("certify", "solve, then test the bound on random cube functions"),
    ):
        p_mul = sub.add_parser(name, help=help_text)
        p_mul.add_argument("problem", nargs="?", default=None, help="problem JSON file")
        p_mul.add_argument("--p", type=float, default=None)
        p_mul.add_argument("--q", type=float, default=None)
        p_mul.add_argument("--d", type=int, default=None)
        p_mul.add_argument(
            "--symbol",
            choices=["geometric", "exp", "laplacian", "identity", "delta"],
            default=None,
            help="geometric: r^j, exp: e^{-rj}, laplacian: j, identity: 1, delta: [j=0]",
        )
        p_mul.add_argument("--r", type=float, default=None)
        p_mul.add_argument("--M", type=int, default=None, help="boundary samples")
        p_mul.add_argument("--domain", choices=["complex", "real"], default=None)
        p_mul.add_argument("--n", type=int, default=None, help="cube dimension (certify)")
        p_mul.add_argument("--trials", type=int, default=None, help="random functions (certify)")
        p_mul.set_defaults(build=_cmd_multiplier)

    p_run = sub.add_parser("run", help="execute a stored RunConfig JSON")
    p_run.add_argument("config", type=Path)
    p_run.set_defaults(build=None)
    return parser


def _load_config(path: Path) -> RunConfig:
    try:
        return RunConfig.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, ValidationError) as exc:
        raise InvalidInputError(f"{path} is not a valid run config: {exc}") from exc


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    configure_logging(args.log_level)

    try:
        if args.build is None:
            cfg = _load_config(args.config)
            updates = {
                k: getattr(args, k)
                for k in ("seed", "tolerance", "threads", "out")
                if getattr(args, k) is not None
            }
            cfg = cfg.model_copy(update=updates)
        else:
            cfg = RunConfig(
                command=args.command,
                params=args.build(args),
                seed=args.seed,
                tolerance=args.tolerance,
                threads=args.threads,
                out=args.out,
            )
    except (InvalidInputError, ValidationError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
