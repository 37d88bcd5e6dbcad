# src/hypercube/reports.py
"""JSON and CSV emitters.

JSON is UTF-8 with sorted keys; CSV has a header row and writes floats with
17 significant digits. Both carry ``schema: 1``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from hypercube.errors import InvalidInputError
from hypercube.schemas.lens import LensParams
from hypercube.schemas.search import decode_coefficients, encode_coefficients
from hypercube.schemas.verification import SCHEMA_VERSION
from hypercube.services.lens import (
    admissibility_margin,
    boundary_radius_closed,
    boundary_radius_inf,
    is_admissible,
    lens_params,
)

__all__ = [
    "admissible_report",
    "boundary_rows",
    "decode_coefficients",
    "emit",
    "encode_coefficients",
    "format_float",
    "to_csv",
    "to_json",
]

# volatile fields left out of byte-stable output
TIMING_FIELDS = frozenset({"seconds"})


def format_float(x: float) -> str:
    return f"{x:.17g}"


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", by_alias=True)
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _strip(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _strip(v) for k, v in value.items() if k not in TIMING_FIELDS}
    if isinstance(value, list):
        return [_strip(v) for v in value]
    return value


def to_json(payload: Any, stable: bool = False) -> str:
    data = _plain(payload)
    if stable:
        data = _strip(data)
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def to_csv(rows: Iterable[Mapping[str, Any]], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["schema", *columns])
    for row in rows:
        cells = []
        for col in columns:
            value = row.get(col, "")
            cells.append(format_float(value) if isinstance(value, float) else value)
        writer.writerow([SCHEMA_VERSION, *cells])
    return buf.getvalue()


def emit(text: str, out: str | Path | None = None) -> None:
    """Write to ``out`` or to stdout."""
    if out is None:
        print(text, end="")
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc}") from exc


# --- Report builders ---------------------------------------------------------------


def admissible_report(p: float, q: float | None, z: complex) -> dict[str, Any]:
    q = p if q is None else q
    z = complex(z)
    report: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "p": p,
        "q": q,
        "z": [z.real, z.imag],
        "admissible": is_admissible(p, q, z),
        "margin": float(admissibility_margin(p, q, z)),
    }
    if p == q and p > 1:
        params: LensParams = lens_params(p)
        report["lens"] = params.model_dump()
        report["alpha"] = params.alpha
    return report


def boundary_rows(
    p: float, q: float | None, count: int, t_min: float = 0.0, t_max: float = math.pi
) -> tuple[list[str], list[dict[str, float]]]:
    """Rows (t, r, c, margin); for p = q also r_inf and |r - r_inf|."""
    q = p if q is None else q
    t = np.linspace(t_min, t_max, count)
    r_inf = np.asarray(boundary_radius_inf(p, q, t), dtype=np.float64)
    symmetric = p == q
    r = np.asarray(boundary_radius_closed(p, t), dtype=np.float64) if symmetric else r_inf
    margin = admissibility_margin(p, q, r * np.exp(1j * t))
    columns = ["t", "r", "c", "margin"]
    if symmetric:
        columns += ["r_inf", "diff"]
    rows = []
    for k in range(count):
        row = {"t": float(t[k]), "r": float(r[k]), "c": float(1.0 / r[k]), "margin": float(margin[k])}
        if symmetric:
            row["r_inf"] = float(r_inf[k])
            row["diff"] = float(abs(r[k] - r_inf[k]))
        rows.append(row)
    return columns, rows
