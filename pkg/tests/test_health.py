from hypercube.config import settings


def test_health_ok(client):
    r = client.get("/health")
    assert r.status_code == 200
    data = r.json()
    assert data["status"] == "ok"
    assert "time" in data
    assert data["schema"] == 1


def test_versioned_health_ok(client):
    r = client.get("/api/v1/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_health_reports_the_dimension_caps(client):
    caps = client.get("/api/v1/health").json()["caps"]
    assert caps == {
        "dimension": settings.dimension_cap,
        "search": settings.search_dimension_cap,
        "certify": settings.certify_dimension_cap,
    }
    assert client.get("/health").json()["caps"] == caps
