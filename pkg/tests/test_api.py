"""Test cases for the /api/v1 endpoints."""

import math

import pytest


# Admissibility
def test_admissible_inside(client):
    r = client.post("/api/v1/admissible", json={"p": 2.5, "z": [0.5, 0.2]})
    assert r.status_code == 200
    data = r.json()
    assert data["admissible"] is True
    assert data["q"] == 2.5
    assert "lens" in data
    assert data["alpha"] == pytest.approx(1.12815, abs=1e-4)


def test_admissible_outside(client):
    r = client.post("/api/v1/admissible", json={"p": 2.5, "z": [0.0, 1.0]})
    assert r.status_code == 200
    assert r.json()["admissible"] is False
    assert r.json()["margin"] < 0


def test_admissible_rejects_p_above_q(client):
    r = client.post("/api/v1/admissible", json={"p": 3.0, "q": 2.0, "z": [0.1, 0.0]})
    assert r.status_code == 422


def test_admissible_requires_z(client):
    r = client.post("/api/v1/admissible", json={"p": 2.5})
    assert r.status_code == 422


# Boundary
def test_boundary_rows(client):
    r = client.get("/api/v1/boundary", params={"p": 2.5, "count": 9})
    assert r.status_code == 200
    data = r.json()
    assert data["schema"] == 1
    assert data["columns"] == ["t", "r", "c", "margin", "r_inf", "diff"]
    assert len(data["rows"]) == 9
    assert data["rows"][0]["r"] == pytest.approx(1.0)


def test_boundary_count_is_capped(client):
    r = client.get("/api/v1/boundary", params={"p": 2.5, "count": 5000})
    assert r.status_code == 422


# Verification
def test_list_inequalities(client):
    r = client.get("/api/v1/verify")
    assert r.status_code == 200
    data = r.json()
    assert "reduced" in data
    assert "mock-logsob" in data


def test_verify_reduced(client):
    payload = {
        "axes": [
            {"name": "a", "min": 0.0, "max": math.pi / 2, "count": 8},
            {"name": "t", "min": 0.0, "max": math.pi / 2, "count": 8},
            {"name": "y", "min": 0.0, "max": 1.0, "count": 8},
        ],
        "fixed": {"p": 2.5},
        "refine": False,
    }
    r = client.post("/api/v1/verify/reduced", json=payload)
    assert r.status_code == 200
    data = r.json()
    assert data["schema"] == 1
    assert data["pass"] is True
    assert data["inequality"] == "reduced"


def test_verify_default_grid(client):
    r = client.post("/api/v1/verify/mock-logsob", json={"fixed": {"p": 2.5}, "refine": False})
    assert r.status_code == 200
    assert r.json()["pass"] is False


def test_verify_unknown_inequality(client):
    r = client.post("/api/v1/verify/nope", json={})
    assert r.status_code == 404


def test_verify_rejects_a_clashing_grid(client):
    payload = {
        "axes": [{"name": "a", "min": 0.0, "max": 1.0, "count": 2}],
        "fixed": {"a": 0.5, "p": 2.5},
    }
    r = client.post("/api/v1/verify/reduced", json=payload)
    assert r.status_code == 422


def test_verify_rejects_a_failed_precondition(client):
    r = client.post("/api/v1/verify/reduced", json={"fixed": {"p": 1.5}, "refine": False})
    assert r.status_code == 422


# Search
def test_search_inside(client):
    payload = {"p": 2.5, "z": [0.5, 0.0], "config": {"restarts": 4, "steps": 10, "seed": 1}}
    r = client.post("/api/v1/search", json=payload)
    assert r.status_code == 200
    data = r.json()
    assert data["violation"] is False
    assert data["schema"] == 1
    assert data["config"]["seed"] == 1


def test_search_dimension_cap(client):
    payload = {"p": 2.5, "z": [0.5, 0.0], "config": {"n": 11, "restarts": 1, "steps": 1}}
    r = client.post("/api/v1/search", json=payload)
    assert r.status_code == 422


def test_search_rejects_p_above_q(client):
    r = client.post("/api/v1/search", json={"p": 3.0, "q": 2.0, "z": [0.5, 0.0]})
    assert r.status_code == 422


# Multiplier
def test_multiplier_solve(client):
    payload = {"p": 2.5, "d": 2, "phi": [[1, 0], [0.5, 0], [0.25, 0]]}
    r = client.post("/api/v1/multiplier/solve", json=payload)
    assert r.status_code == 200
    data = r.json()
    assert data["lower"] >= 1 - 1e-9
    assert data["upper"] <= 1 + 1e-2
    assert data["gap"] == pytest.approx(data["upper"] - data["lower"])


def test_multiplier_rejects_wrong_length(client):
    r = client.post("/api/v1/multiplier/solve", json={"p": 2.5, "d": 3, "phi": [[1, 0]]})
    assert r.status_code == 422
