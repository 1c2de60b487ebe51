import pytest
from fastapi.testclient import TestClient
from httpx import ASGITransport, AsyncClient
from unittest.mock import patch
from app.main import app
from app.schemas import AtlasResponse, CheckResponse, CurvesResponse, DualResponse, ResidualResponse


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def cubic_window():
    """(81/100 - x^2)(1/5 - x) on [-9/10, 9/10] in the window file format"""
    return {
        "alpha": "9/10",
        "pieces": [{"interval": ["-9/10", "9/10"], "coeffs": ["81/500", "-81/100", "-1/5", "1"]}],
    }


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_check_inline_window(client, cubic_window):
    """Frame decision for an inline window"""
    response = client.post("/check", json={"window": cubic_window, "a": "1", "b": "3/5"})

    assert response.status_code == 200
    data = response.json()
    assert data["schema"] == 1
    assert data["verdict"] == "Frame"
    assert data["M"] == 2 and data["kappa"] == 1
    assert data["witnesses"][0]["zero"] == "1/5"
    # Validate with Pydantic
    CheckResponse.model_validate(data)


def test_check_out_of_scope_is_not_an_error(client):
    response = client.post("/check", json={"bspline": 2, "a": "5/2", "b": "1/4"})
    assert response.status_code == 200
    data = response.json()
    assert data["verdict"] == "OutOfScope"
    assert data["atlas_label"] == "NotFrame_aGeN"


def test_check_missing_window_source(client):
    """Test 400 when neither window nor bspline is given"""
    response = client.post("/check", json={"a": "1", "b": "3/5"})
    assert response.status_code == 400
    assert "detail" in response.json()


def test_check_missing_parameter(client):
    response = client.post("/check", json={"bspline": 2, "b": "3/5"})
    assert response.status_code == 400
    assert "Field 'a' is required" in response.json()["detail"]


def test_check_bad_rational(client):
    response = client.post("/check", json={"bspline": 2, "a": "one", "b": "3/5"})
    assert response.status_code == 400


def test_check_invalid_window(client):
    """A window that does not vanish outside its support is rejected"""
    window = {"alpha": "1", "pieces": [{"interval": ["-1", "1"], "coeffs": ["1"]}]}
    response = client.post("/check", json={"window": window, "a": "1", "b": "1/2"})
    assert response.status_code == 400
    assert response.json()["detail"].startswith("Invalid request")


def test_dual_summary(client, cubic_window):
    response = client.post("/dual", json={"window": cubic_window, "a": "1", "b": "3/5", "grid": 11})
    assert response.status_code == 200
    data = response.json()
    DualResponse.model_validate(data)
    assert data["summary"]["support"] == ["-2", "2"]
    assert data["summary"]["epsilon"] == "1/60"
    assert len(data["samples"]) == 11
    assert data["samples"][0] == [-2.0, 0.0]


def test_dual_not_frame(client, cubic_window):
    window = dict(cubic_window)
    window["pieces"] = [
        {"interval": ["-9/10", "9/10"], "coeffs": ["27/1250", "27/500", "-251/300", "-1/15", "1"]}
    ]
    response = client.post("/dual", json={"window": window, "a": "1", "b": "3/5"})
    assert response.status_code == 400
    assert "needs a frame" in response.json()["detail"]


def test_verify(client, cubic_window):
    response = client.post("/verify", json={"window": cubic_window, "a": "1", "b": "3/5", "grid": 200, "tol": 1e-6})
    assert response.status_code == 200
    data = response.json()
    ResidualResponse.model_validate(data)
    assert data["passed"] is True


def test_verify_internal_error(client):
    """Unexpected failures map to 500"""
    with patch("app.main.run_verify", side_effect=RuntimeError("solver crashed")):
        response = client.post("/verify", json={"bspline": 2, "a": "6/5", "b": "7/10"})

    assert response.status_code == 500
    assert "solver crashed" in response.json()["detail"]


def test_curves(client):
    window = {
        "alpha": "9/10",
        "pieces": [{"interval": ["-9/10", "9/10"], "coeffs": ["27/1250", "27/500", "-251/300", "-1/15", "1"]}],
    }
    response = client.post("/curves", json={"window": window, "max_index": 2})
    assert response.status_code == 200
    data = response.json()
    CurvesResponse.model_validate(data)
    assert any(c["formula"] == "b = 1/(-1/3 + 2*a)" for c in data["curves"])


def test_atlas(client):
    response = client.post("/atlas", json={"bspline": 3, "res": 4})
    assert response.status_code == 200
    data = response.json()
    AtlasResponse.model_validate(data)
    assert len(data["cells"]) == 16
    assert sum(data["counts"].values()) == 16


def test_atlas_rejects_order_one(client):
    response = client.post("/atlas", json={"bspline": 1})
    assert response.status_code == 400


def test_zzbound(client):
    response = client.post("/zzbound", json={"bspline": 2, "a": "1", "b": "1/2", "grid": 64})
    assert response.status_code == 200
    assert response.json()["estimate"] == pytest.approx(1.0)


@pytest.mark.asyncio
async def test_check_async_client():
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        response = await ac.post("/check", json={"bspline": 2, "a": "6/5", "b": "7/10"})

    assert response.status_code == 200
    assert response.json()["verdict"] == "Frame"
