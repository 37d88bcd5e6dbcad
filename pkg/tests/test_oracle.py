"""Tests for the contractivity oracle: ratios, searches and the induction step."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from hypercube.config import Settings
from hypercube.errors import InvalidInputError, ResourceError
from hypercube.schemas.search import SearchConfig
from hypercube.services import oracle
from hypercube.services.cube import CubeFunction, constant, random_function
from hypercube.services.inequalities import two_point_margin
from hypercube.services.lens import boundary_points, boundary_radius_closed
from hypercube.services.oracle import (
    ACCEPT_SLACK,
    induction_chain,
    induction_step_check,
    norm_ratio,
    search_violation,
    tensorization_check,
    witness_function,
)


def _inside(p, k=1, count=4, scale=0.9):
    return scale * boundary_points(p, p, count)[k]


# Norm ratio
def test_constant_ratio_is_one():
    for z in (0.3j, 1.5, -0.2 + 0.9j):
        assert norm_ratio(constant(3, 2.0), 2.5, 3.0, z) == pytest.approx(1.0)


def test_z_one_ratio_is_one(rng):
    f = random_function(4, rng)
    assert norm_ratio(f, 2.5, 2.5, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_two_point_ratio_matches_margin():
    """For f = 1 + w·x₁ the ratio is at most one exactly when the two-point margin is."""
    p, w = 2.5, 0.3 * np.exp(0.2j)
    z = boundary_radius_closed(p, math.pi / 4) * np.exp(1j * math.pi / 4)
    f = CubeFunction(1, np.array([1.0, w]))
    assert norm_ratio(f, p, p, z) <= 1 + ACCEPT_SLACK
    assert two_point_margin(p, p, z, w) >= -1e-12


def test_zero_function_is_rejected():
    with pytest.raises(InvalidInputError):
        norm_ratio(constant(2, 0.0), 2.5, 2.5, 0.5)


# Search
def test_search_inside_the_lens_finds_nothing():
    cfg = SearchConfig(restarts=64, steps=120)
    result = search_violation(2.5, 2.5, _inside(2.5), cfg)
    assert not result.violation
    assert result.best_ratio <= 1 + ACCEPT_SLACK
    assert result.evaluations == 64 * 121
    assert result.n == 1


def test_search_outside_the_lens_finds_a_violation():
    z = 1.05 * boundary_points(2.5, 2.5, 4)[1]
    result = search_violation(2.5, 2.5, z, SearchConfig(restarts=32, steps=200))
    assert result.violation
    assert result.best_ratio > 1 + ACCEPT_SLACK
    f = witness_function(result)
    assert norm_ratio(f, 2.5, 2.5, z) == pytest.approx(result.best_ratio, rel=1e-9)


def test_search_in_two_dimensions_inside_the_lens():
    cfg = SearchConfig(n=2, restarts=16, steps=80)
    result = search_violation(2.5, 2.5, _inside(2.5, k=3), cfg)
    assert not result.violation
    assert witness_function(result).n == 2


def test_search_is_reproducible_across_batches_and_workers():
    z = 1.02 * boundary_points(2.2, 2.2, 8)[2]
    base = SearchConfig(n=2, restarts=9, steps=40, seed=7)
    one = search_violation(2.2, 2.2, z, base)
    split = search_violation(
        2.2, 2.2, z, base.model_copy(update={"batch_size": 2, "workers": 3})
    )
    assert one.best_ratio == split.best_ratio
    assert one.restart == split.restart
    assert one.witness == split.witness


@pytest.mark.parametrize("p", [2.2, 2.5, 2.8])
def test_search_on_the_boundary_finds_nothing(p):
    cfg = SearchConfig(restarts=16, steps=120)
    for z in boundary_points(p, p, 8):
        result = search_violation(p, p, z, cfg)
        assert result.best_ratio <= 1 + ACCEPT_SLACK, f"t={np.angle(z):.3f}"
        assert not result.violation


@pytest.mark.parametrize("k", [1, 2, 3])
def test_search_just_outside_the_boundary_finds_a_violation(k):
    """Two percent past the boundary is enough for a one-coordinate witness."""
    z = 1.02 * boundary_points(2.5, 2.5, 8)[k]
    result = search_violation(2.5, 2.5, z, SearchConfig(restarts=32, steps=200))
    assert result.violation
    assert norm_ratio(witness_function(result), 2.5, 2.5, z) == pytest.approx(
        result.best_ratio, rel=1e-9
    )


def test_best_ratio_grows_along_a_ray():
    """Past the first violation the best ratio is nondecreasing in |z|."""
    edge = boundary_points(2.5, 2.5, 8)[2]
    cfg = SearchConfig(restarts=32, steps=200)
    results = [search_violation(2.5, 2.5, s * edge, cfg) for s in (1.02, 1.08, 1.15)]
    assert all(r.violation for r in results)
    ratios = [r.best_ratio for r in results]
    assert ratios == sorted(ratios)
    # each witness does at least as well further out
    for r, s in zip(results[:-1], (1.08, 1.15)):
        assert norm_ratio(witness_function(r), 2.5, 2.5, s * edge) >= r.best_ratio - 1e-12


def test_search_depends_on_the_seed():
    z = _inside(2.5)
    a = search_violation(2.5, 2.5, z, SearchConfig(restarts=4, steps=10, seed=1))
    b = search_violation(2.5, 2.5, z, SearchConfig(restarts=4, steps=10, seed=2))
    assert a.witness != b.witness


def test_search_dimension_is_capped_by_the_schema():
    with pytest.raises(ValidationError):
        SearchConfig(n=11, restarts=1, steps=1)


def test_search_dimension_cap_from_settings(monkeypatch):
    monkeypatch.setenv("HC_SEARCH_DIMENSION_CAP", "3")
    monkeypatch.setattr(oracle, "settings", Settings())
    with pytest.raises(ResourceError):
        search_violation(2.5, 2.5, 0.5, SearchConfig(n=4, restarts=1, steps=1))


def test_search_rejects_p_above_q():
    with pytest.raises(InvalidInputError):
        search_violation(3.0, 2.5, 0.5, SearchConfig(restarts=1, steps=1))


# Tensorization
def test_tensorization_with_k_one(rng):
    f = random_function(2, rng)
    assert tensorization_check(f, 1, 2.5, 2.5, 0.4 + 0.3j) == 0.0


@pytest.mark.parametrize("n, k", [(2, 2), (1, 3)])
def test_tensorization_is_exact(rng, n, k):
    f = random_function(n, rng)
    assert tensorization_check(f, k, 2.5, 3.0, 0.4 + 0.3j) <= 1e-10


def test_tensorization_respects_dimension_cap(rng):
    with pytest.raises(ResourceError):
        tensorization_check(random_function(5, rng), 5, 2.5, 2.5, 0.5)


# Induction step
def test_induction_without_first_coordinate_is_flat(rng):
    coeffs = random_function(3, rng).coeffs.copy()
    coeffs[1::2] = 0.0
    f = CubeFunction(3, coeffs)
    chain = induction_chain(f, 2.5, 2.5, _inside(2.5))
    assert chain.q1 == pytest.approx(chain.q0, rel=1e-12)
    assert chain.q2 == pytest.approx(chain.q1, rel=1e-12)


def test_induction_gaps_inside_the_lens(rng):
    for _ in range(10):
        f = random_function(2, rng)
        assert induction_step_check(f, 2.5, 2.5, _inside(2.5, k=1)) >= -1e-10


def test_induction_gaps_for_unequal_exponents(rng):
    z = 0.9 * boundary_points(2.0, 3.0, 6)[1]
    for _ in range(5):
        f = random_function(3, rng)
        assert induction_step_check(f, 2.0, 3.0, z) >= -1e-10


def test_induction_gaps_p_equals_q_three_dimensions(rng):
    f = random_function(3, rng)
    assert induction_step_check(f, 2.8, 2.8, _inside(2.8, k=2, count=8)) >= -1e-10


def test_induction_needs_two_coordinates(rng):
    with pytest.raises(InvalidInputError):
        induction_chain(random_function(1, rng), 2.5, 2.5, 0.5)
