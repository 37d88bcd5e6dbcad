"""Tests for the grid-scan engine and the inequality registry."""

import math

import numpy as np
import pytest

from hypercube.errors import InvalidInputError
from hypercube.schemas.verification import GridAxis, GridSpec
from hypercube.services.lens import boundary_points
from hypercube.services.scan import REGISTRY, get_inequality, scan


def _grid(*axes, **kw):
    return GridSpec(axes=[GridAxis(**a) for a in axes], **kw)


def _reduced_grid(count, **kw):
    return _grid(
        {"name": "a", "min": 0.0, "max": math.pi / 2, "count": count},
        {"name": "t", "min": 0.0, "max": math.pi / 2, "count": count},
        {"name": "y", "min": 0.0, "max": 1.0, "count": count},
        fixed={"p": 2.5},
        **kw,
    )


def _z_fixed(p, z):
    return {"p": p, "q": p, "z_re": z.real, "z_im": z.imag}


# Registry
def test_registry_ids():
    expected = {
        "two-point",
        "necessity",
        "reduced",
        "mock-logsob",
        "series",
        "cap",
        "coefficient-ratio",
        "final-chain",
        "self-improvement",
        "bernoulli",
        "quartic",
        "angle-ratio",
        "real-two-point",
    }
    assert expected <= set(REGISTRY)


def test_unknown_inequality():
    with pytest.raises(InvalidInputError):
        get_inequality("no-such-thing")
    with pytest.raises(InvalidInputError):
        scan("no-such-thing")


def test_default_grid_drops_fixed_axes():
    grid = get_inequality("series").default_grid({"y": 0.5})
    assert [a.name for a in grid.axes] == ["a", "t"]
    assert grid.fixed == {"y": 0.5}


# Grid validation
def test_empty_axis_is_rejected():
    grid = _grid({"name": "a", "min": 0, "max": 1, "count": 0}, fixed={"p": 2.5, "t": 0.1, "y": 0.5})
    with pytest.raises(InvalidInputError):
        scan("reduced", grid)


def test_unknown_parameter_is_rejected():
    grid = _reduced_grid(4)
    grid = grid.model_copy(update={"fixed": {"p": 2.5, "bogus": 1.0}})
    with pytest.raises(InvalidInputError):
        scan("reduced", grid)


def test_missing_parameter_is_rejected():
    grid = _grid({"name": "rho", "min": 0, "max": 0.1, "count": 4}, fixed={"p": 2.5, "phi": 0.3})
    with pytest.raises(InvalidInputError):
        scan("two-point", grid)


def test_precondition_is_checked():
    grid = _reduced_grid(4).model_copy(update={"fixed": {"p": 1.5}})
    with pytest.raises(InvalidInputError):
        scan("reduced", grid)


def test_grid_outside_domain_is_rejected():
    grid = _grid(
        {"name": "a", "min": 1.2, "max": 1.5, "count": 4},
        {"name": "t", "min": 1.0, "max": 1.5, "count": 4},
        {"name": "y", "min": 0.0, "max": 1.0, "count": 4},
        fixed={"p": 2.5},
    )
    with pytest.raises(InvalidInputError):
        scan("reduced", grid)


def test_gridded_and_fixed_clash_is_rejected():
    with pytest.raises(ValueError):
        _grid({"name": "a", "min": 0, "max": 1, "count": 2}, fixed={"a": 0.5})


# Reports
def test_reduced_scan_passes():
    report = scan("reduced", _reduced_grid(16))
    assert report.passed
    assert report.expected
    assert report.as_expected
    assert report.worst_margin >= -1e-10
    assert report.tolerance == 1e-10
    assert {"a", "t", "y", "c", "s", "p"} <= set(report.witness)
    assert report.witness["p"] == 2.5


def test_report_serializes_pass_alias():
    report = scan("reduced", _reduced_grid(6, refine=False))
    data = report.model_dump(mode="json", by_alias=True)
    assert data["schema"] == 1
    assert "pass" in data
    assert data["evaluated"] == report.evaluated


def test_scan_is_independent_of_workers():
    grid = _grid(
        {"name": "a", "min": 0.0, "max": math.pi / 2, "count": 130},
        {"name": "t", "min": 0.0, "max": math.pi / 2, "count": 32},
        {"name": "y", "min": 0.0, "max": 1.0, "count": 32},
        fixed={"p": 2.5},
        refine=False,
    )
    one = scan("reduced", grid, workers=1)
    four = scan("reduced", grid, workers=4)
    assert one.worst_margin == four.worst_margin
    assert one.witness == four.witness
    assert one.evaluated == four.evaluated


def test_tolerance_override():
    report = scan("reduced", _reduced_grid(6, refine=False), tolerance=1e-3)
    assert report.tolerance == 1e-3


def test_two_point_inside_the_lens_passes():
    z = 0.9 * boundary_points(2.5, 2.5, 6)[1]
    grid = get_inequality("two-point").default_grid(_z_fixed(2.5, z))
    report = scan("two-point", grid)
    assert report.passed
    assert report.as_expected


def test_q_defaults_to_p():
    fixed = {"p": 2.5, "z_re": 0.5, "z_im": 0.1}
    report = scan("two-point", get_inequality("two-point").default_grid(fixed, refine=False))
    assert report.witness["q"] == 2.5


def test_two_point_outside_the_lens_finds_violations():
    for z in boundary_points(2.5, 2.5, 8):
        grid = get_inequality("two-point").default_grid(_z_fixed(2.5, 1.02 * z), refine=False)
        report = scan("two-point", grid)
        assert not report.passed
        assert not report.expected
        assert report.as_expected
        assert report.worst_margin <= -1e-6
        assert abs(complex(report.witness["rho"])) <= 0.2


def test_necessity_scan_outside_the_lens_fails():
    z = 1.05 * boundary_points(2.5, 2.5, 4)[1]
    report = scan("necessity", get_inequality("necessity").default_grid(_z_fixed(2.5, z)))
    assert not report.passed
    assert report.as_expected


@pytest.mark.parametrize("p", [3.0, 3.5])
def test_mock_logsob_monotone_from_three(p):
    report = scan("mock-logsob", get_inequality("mock-logsob").default_grid({"p": p}))
    assert report.tolerance == 1e-9
    assert report.passed
    assert report.as_expected


def test_mock_logsob_decreases_below_three():
    grid = get_inequality("mock-logsob").default_grid({"p": 2.5}, refine=False)
    report = scan("mock-logsob", grid)
    assert not report.passed
    assert not report.expected
    assert report.as_expected


def test_series_scan_carries_uncertainty():
    grid = get_inequality("series").default_grid(refine=False)
    report = scan("series", grid)
    assert report.passed
    assert report.uncertainty is not None
    # the dropped tail is largest where 2y/(1+y²) is close to one
    assert 0 < report.uncertainty < 0.05
    assert report.witness["s"] == 1.25


def test_cap_scan_passes():
    report = scan("cap", get_inequality("cap").default_grid(refine=False))
    assert report.tolerance == 1e-12
    assert report.passed
    ells = REGISTRY["cap"].default_axes({})[0]
    assert ells.integer and ells.count == 11


def test_coefficient_ratio_scan_passes():
    report = scan("coefficient-ratio")
    assert report.passed
    assert float(report.witness["ell"]).is_integer()


@pytest.mark.parametrize(
    "inequality, fixed",
    [
        ("final-chain", {}),
        ("self-improvement", {}),
        ("angle-ratio", {"p": 2.5}),
        ("real-two-point", {"p": 2.0, "q": 3.0}),
        ("bernoulli", {}),
        ("quartic", {}),
    ],
)
def test_proof_steps_pass(inequality, fixed):
    grid = get_inequality(inequality).default_grid(fixed, refine=False)
    report = scan(inequality, grid)
    assert report.passed, report.witness
    assert report.evaluated > 0


def test_final_chain_witness_has_derived_angle():
    grid = get_inequality("final-chain").default_grid(refine=False)
    report = scan("final-chain", grid)
    assert {"C", "t"} <= set(report.witness)
    C, s = report.witness["C"], report.witness["s"]
    assert 1 - 1e-12 <= C <= 2 * s - 1 + 1e-12


def test_zoom_adds_points():
    coarse = scan("reduced", _reduced_grid(8, refine=False))
    zoomed = scan("reduced", _reduced_grid(8))
    assert zoomed.evaluated > coarse.evaluated
    assert zoomed.worst_margin <= coarse.worst_margin
    assert np.isfinite(zoomed.worst_margin)
