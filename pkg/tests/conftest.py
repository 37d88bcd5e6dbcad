import numpy as np
import pytest
from fastapi.testclient import TestClient

from hypercube.main import app


@pytest.fixture
def rng():
    """Seeded generator so every test draws the same random functions."""
    return np.random.default_rng(20251018)


@pytest.fixture(scope="session")
def client():
    """Provide a TestClient for the FastAPI app."""
    with TestClient(app) as c:
        yield c
