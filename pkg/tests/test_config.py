"""Tests for environment-driven settings."""

import pytest
from pydantic import ValidationError

from hypercube.config import HARD_DIMENSION_CAP, Settings


def test_defaults():
    s = Settings()
    assert s.tolerance == 1e-10
    assert s.dimension_cap == HARD_DIMENSION_CAP
    assert s.search_dimension_cap == 10
    assert s.certify_dimension_cap == 8
    assert s.allowed_origins == ["*"]


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("HC_TOLERANCE", "1e-6")
    monkeypatch.setenv("HC_THREADS", "4")
    monkeypatch.setenv("HC_SEED", "42")
    s = Settings()
    assert s.tolerance == 1e-6
    assert s.threads == 4
    assert s.seed == 42


def test_origins_are_split(monkeypatch):
    monkeypatch.setenv("CORS_ALLOWED_ORIGINS", "http://a.test, http://b.test,")
    assert Settings().allowed_origins == ["http://a.test", "http://b.test"]


@pytest.mark.parametrize(
    "name, value",
    [
        ("HC_DIMENSION_CAP", "25"),
        ("HC_DIMENSION_CAP", "-1"),
        ("HC_SEARCH_DIMENSION_CAP", "0"),
        ("HC_SEARCH_DIMENSION_CAP", "11"),
        ("HC_CERTIFY_DIMENSION_CAP", "0"),
        ("HC_TOLERANCE", "-1"),
        ("HC_THREADS", "0"),
    ],
)
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings()


def test_search_cap_cannot_exceed_dimension_cap(monkeypatch):
    monkeypatch.setenv("HC_DIMENSION_CAP", "6")
    with pytest.raises(ValidationError):
        Settings()
    monkeypatch.setenv("HC_SEARCH_DIMENSION_CAP", "6")
    monkeypatch.setenv("HC_CERTIFY_DIMENSION_CAP", "6")
    assert Settings().dimension_cap == 6
