"""
Tests for FastAPI application.
"""
import json

import pytest
from fastapi.testclient import TestClient

from src.api.main import app
from tests.conftest import FIXTURES
from tests.test_document import A2_DOCUMENT


@pytest.fixture
def client():
    """Create test client."""
    return TestClient(app)


def test_root_endpoint(client):
    """Test root endpoint."""
    response = client.get("/")

    assert response.status_code == 200
    data = response.json()
    assert data["message"] == "MoritaKit API"
    assert "version" in data
    assert data["status"] == "running"
    assert data["commands"] >= 20


def test_health_check(client):
    """Test health check endpoint."""
    response = client.get("/health")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert "timestamp" in data
    assert "version" in data
    assert data["default_cutoff"] >= 1
    assert data["default_field"].startswith(("QQ", "GF("))


def test_process_time_header(client):
    response = client.get("/")

    assert "X-Process-Time" in response.headers


def test_list_commands(client):
    response = client.get("/api/v1/commands")

    assert response.status_code == 200
    assert "gldim" in response.json()


def test_run_command(client):
    response = client.post("/api/v1/run/gldim", json={"document": A2_DOCUMENT, "cutoff": 8})

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "ok"
    assert data["results"]["algebra"]["gldim"]["value"] == 1


def test_run_fixture_document(client):
    document = json.loads((FIXTURES / "ex5_1.json").read_text(encoding="utf-8"))
    response = client.post("/api/v1/run/loewy", json={"document": document})

    assert response.status_code == 200
    assert response.json()["results"]["loewy_A"] == 1


def test_run_error_report(client):
    """Domain failures come back as error reports, not HTTP errors."""
    response = client.post("/api/v1/run/simples", json={"document": A2_DOCUMENT})

    assert response.status_code == 200
    assert response.json()["status"] == "error"


def test_bad_prime_is_400(client):
    response = client.post("/api/v1/run/gldim", json={"document": A2_DOCUMENT, "prime": 4})

    assert response.status_code == 400
    assert response.json()["error_type"] == "FieldMismatchError"


def test_invalid_document_is_422(client):
    response = client.post("/api/v1/run/gldim", json={"document": {"options": {}}})

    assert response.status_code == 422


@pytest.mark.parametrize("command", ["examples", "frobnicate"])
def test_unknown_command(client, command):
    response = client.post(f"/api/v1/run/{command}", json={"document": A2_DOCUMENT})

    assert response.status_code == 404


def test_metrics(client):
    client.post("/api/v1/run/loewy", json={"document": A2_DOCUMENT})
    response = client.get("/api/v1/metrics")

    assert response.status_code == 200
    assert "command:loewy" in response.json()


def test_404_endpoint(client):
    """Test non-existent endpoint returns 404."""
    response = client.get("/nonexistent")

    assert response.status_code == 404
