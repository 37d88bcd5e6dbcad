"""Tests for the command-line front end and the report emitters."""

import argparse
import json

import numpy as np
import pytest

from hypercube.cli import main, parse_assignment, parse_complex, symbol_values
from hypercube.errors import InvalidInputError
from hypercube.reports import to_csv, to_json


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# Argument helpers
def test_parse_complex():
    assert parse_complex("1,2") == (1.0, 2.0)
    assert parse_complex("0.5") == (0.5, 0.0)
    for bad in ("a,b", "1,2,3", "nan,0"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_complex(bad)


def test_parse_assignment():
    assert parse_assignment("y=0.5") == ("y", 0.5)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_assignment("y")
    with pytest.raises(argparse.ArgumentTypeError):
        parse_assignment("y=abc")


def test_symbol_values():
    assert np.allclose(symbol_values("laplacian", 3), [0, 1, 2, 3])
    assert np.allclose(symbol_values("geometric", 2, 0.5), [1, 0.5, 0.25])
    assert np.allclose(symbol_values("delta", 2), [1, 0, 0])
    with pytest.raises(InvalidInputError):
        symbol_values("bogus", 2)


# Emitters
def test_json_is_sorted_and_stable():
    text = to_json({"b": 1, "a": {"seconds": 2.0, "x": np.float64(0.5)}}, stable=True)
    assert text.endswith("\n")
    assert json.loads(text) == {"a": {"x": 0.5}, "b": 1}
    assert text.index('"a"') < text.index('"b"')


def test_csv_has_schema_column():
    text = to_csv([{"t": 0.1, "r": 1.0}], ["t", "r"])
    header, row = text.strip().splitlines()
    assert header == "schema,t,r"
    assert row.startswith("1,0.1")


# Commands
def test_admissible_inside(capsys):
    code, out = _run(capsys, "admissible", "--p", "2.5", "--z", "1,0")
    assert code == 0
    report = json.loads(out)
    assert report["admissible"] is True
    assert report["alpha"] == pytest.approx(1.12815, abs=1e-4)


def test_admissible_outside_exits_three(capsys):
    code, out = _run(capsys, "admissible", "--p", "2.5", "--z", "0,1")
    assert code == 3
    assert json.loads(out)["admissible"] is False


def test_admissible_invalid_exponents_exit_two(capsys):
    code, out = _run(capsys, "admissible", "--p", "3", "--q", "2", "--z", "0.1,0")
    assert code == 2
    assert "error" in json.loads(out)


def test_boundary_csv(capsys):
    code, out = _run(capsys, "boundary", "--p", "2.5", "--count", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "schema,t,r,c,margin,r_inf,diff"
    assert len(lines) == 6


def test_verify_reduced_passes(capsys):
    code, out = _run(capsys, "verify", "reduced", "--p", "2.5", "--grid", "8", "--no-refine")
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "pass"
    assert report["pass"] is True
    assert report["evaluated"] > 0


def test_verify_mock_logsob_reports_the_counterexample(capsys):
    code, out = _run(capsys, "verify", "mock-logsob", "--p", "2.5", "--no-refine")
    assert code == 0
    report = json.loads(out)
    assert report["outcome"] == "counterexample found"
    assert report["pass"] is False


def test_verify_fixed_assignment(capsys):
    code, out = _run(
        capsys, "verify", "series", "--fix", "y=0.5", "--grid", "6", "--no-refine"
    )
    assert code == 0
    assert json.loads(out)["witness"]["y"] == 0.5


def test_search_inside(capsys):
    code, out = _run(
        capsys, "--seed", "3", "search", "--p", "2.5", "--z", "0.5,0", "--restarts", "4",
        "--steps", "10",
    )
    assert code == 0
    result = json.loads(out)
    assert result["violation"] is False
    assert result["config"]["seed"] == 3


def test_search_violation_exits_three(capsys):
    code, out = _run(
        capsys, "search", "--p", "2.5", "--z", "1.2,0", "--restarts", "16", "--steps", "100"
    )
    assert code == 3
    assert json.loads(out)["violation"] is True


def test_multiplier_geometric(capsys):
    code, out = _run(
        capsys, "multiplier", "--p", "2.5", "--d", "2", "--symbol", "geometric", "--r", "0.5"
    )
    assert code == 0
    solution = json.loads(out)
    assert solution["lower"] >= 1 - 1e-9
    assert solution["upper"] <= 1 + 1e-2
    assert solution["atoms"]


def test_multiplier_needs_a_problem(capsys):
    code, _ = _run(capsys, "multiplier", "--d", "2")
    assert code == 2


def test_certify_geometric(capsys):
    code, out = _run(
        capsys, "certify", "--p", "2.5", "--d", "2", "--symbol", "geometric", "--n", "3",
        "--trials", "10",
    )
    assert code == 0
    assert json.loads(out)["within_bound"] is True


def test_run_replays_a_config(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"command": "admissible", "params": {"p": 2.5, "z": [0.5, 0.0]}}))
    out = tmp_path / "reports" / "admissible.json"
    code, printed = _run(capsys, "--out", str(out), "run", str(config))
    assert code == 0
    assert printed == ""
    assert json.loads(out.read_text())["admissible"] is True


def test_run_rejects_a_bad_config(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"command": "bogus"}))
    code, _ = _run(capsys, "run", str(config))
    assert code == 2


# Usage
def test_usage_errors_exit_two(capsys):
    assert main(["admissible"]) == 2
    assert main(["nope"]) == 2
    assert main(["verify", "no-such-inequality"]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "admissible" in capsys.readouterr().out
