"""
Test the HTTP endpoints
"""
import numpy as np
import pytest
from httpx import AsyncClient

from app.core.constants import hz_to_angular
from app.models import Environment
from app.services.cavity import thermal_occupation
from app.services.interferometer import fano_model

pytestmark = pytest.mark.filterwarnings("ignore::app.core.exceptions.SidebandOverlapWarning")


@pytest.fixture
def small_sweep(backrefl_config_data: dict) -> dict:
    backrefl_config_data["sweep"]["points"] = 41
    return backrefl_config_data


class TestService:

    async def test_health(self, client: AsyncClient):
        response = await client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy"}

    async def test_root(self, client: AsyncClient):
        response = await client.get("/")
        assert response.status_code == 200
        assert "version" in response.json()


class TestSimulation:
    """Simulation endpoints"""

    async def test_eta_sweep(self, client: AsyncClient, small_sweep: dict):
        response = await client.post(
            "/simulation/eta-sweep", json={"config": small_sweep, "phases_rad": [0.0, 2.4190263432641516]}
        )
        assert response.status_code == 200
        data = response.json()
        assert len(data["columns"]) == 5
        assert len(data["data"]["delta_hz"]) == 41
        # Resonant point is undetectable and comes back as null
        assert data["data"]["eta_g[psi=0pi]"][20] is None
        assert sum(s["delta_hz"] == 0.0 for s in data["skipped"]) == 2
        for column in ("g0_measured_hz[psi=0pi]", "g0_measured_hz[psi=0.77pi]"):
            values = [v for v in data["data"][column] if v is not None]
            assert len(values) >= 38
            assert all(0.5 * 452e3 < v < 1.5 * 452e3 for v in values)

    async def test_reflection_default_phase(self, client: AsyncClient, small_sweep: dict):
        response = await client.post("/simulation/reflection", json={"config": small_sweep})
        assert response.status_code == 200
        assert response.json()["columns"][1] == "reflection_exact[psi=0.77pi]"

    async def test_backaction(self, client: AsyncClient, mode3_config_data: dict):
        response = await client.post("/simulation/backaction", json={"config": mode3_config_data})
        assert response.status_code == 200
        data = response.json()["data"]
        assert not any(data["unstable"])
        assert len(data["gamma_eff_hz"]) == 201

    async def test_output_coefficients(self, client: AsyncClient, backrefl_config_data: dict):
        response = await client.post(
            "/simulation/output-coefficients", json={"config": backrefl_config_data, "delta_hz": -7.65e9}
        )
        assert response.status_code == 200
        data = response.json()
        assert data["eta_g"] > 0
        assert set(data["a_carrier"]) == {"real", "imag"}
        assert abs(complex(data["b_mech"]["real"], data["b_mech"]["imag"])) > 0

    async def test_output_coefficients_on_resonance(self, client: AsyncClient, backrefl_config_data: dict):
        response = await client.post(
            "/simulation/output-coefficients", json={"config": backrefl_config_data, "delta_hz": 0.0}
        )
        assert response.status_code == 200
        assert response.json()["eta_g"] is None

    async def test_steady_state(self, client: AsyncClient, mode3_config_data: dict):
        response = await client.post(
            "/simulation/steady-state", json={"config": mode3_config_data, "delta_hz": -7.65e9}
        )
        assert response.status_code == 200
        assert response.json()["photon_number"] > 0

    async def test_invalid_config(self, client: AsyncClient, backrefl_config_data: dict):
        backrefl_config_data["cavity"]["kappa_ex_hz"] = -1.0
        response = await client.post("/simulation/backaction", json={"config": backrefl_config_data})
        assert response.status_code == 422

    async def test_unknown_field(self, client: AsyncClient, backrefl_config_data: dict):
        backrefl_config_data["drive"]["powr_w"] = 1.0
        response = await client.post("/simulation/backaction", json={"config": backrefl_config_data})
        assert response.status_code == 422


class TestCalibration:
    """Synthesis and estimation endpoints"""

    async def test_synthesize_then_estimate(self, client: AsyncClient, mode3_config_data: dict):
        response = await client.post(
            "/calibration/synthesize", json={"config": mode3_config_data, "delta_hz": -7.65e9}
        )
        assert response.status_code == 200
        trace = response.json()
        assert len(trace["psd"]) == 1201

        n_th = thermal_occupation(Environment(temperature=295.0), hz_to_angular(7.65e9))
        response = await client.post("/calibration/estimate", json={
            "trace": trace,
            "mechanical_frequency_hz": 7.65e9,
            "calibration_frequency_hz": 7.66e9,
            "linewidth_hz": 4.91e6,
            "modulation_depth_rad": 0.05,
            "n_th": n_th,
        })
        assert response.status_code == 200
        assert response.json()["g0_hz"] == pytest.approx(452e3, rel=0.005)

    async def test_missing_tone(self, client: AsyncClient):
        trace = {"f_start_hz": 7.62e9, "f_step_hz": 50e3, "enbw_hz": 50e3, "psd": [1.0] * 1201}
        response = await client.post("/calibration/estimate", json={
            "trace": trace,
            "mechanical_frequency_hz": 7.65e9,
            "calibration_frequency_hz": 7.66e9,
            "linewidth_hz": 4.91e6,
            "modulation_depth_rad": 0.05,
            "n_th": 803.0,
        })
        assert response.status_code == 422
        assert response.json()["error"] == "PeakNotDetectedError"


class TestFitting:
    """Fit endpoints"""

    async def test_fano(self, client: AsyncClient):
        delta = np.linspace(-7.5e9, 7.5e9, 201)
        reflection = fano_model(delta, 1.0, 0.5e9, -0.1, 2.47e9, 0.0)
        response = await client.post(
            "/fitting/fano", json={"delta_hz": delta.tolist(), "reflection": reflection.tolist()}
        )
        assert response.status_code == 200
        data = response.json()
        assert data["converged"]
        assert data["params"]["kappa"] == pytest.approx(2.47e9, rel=1e-6)

    async def test_mismatched_lengths(self, client: AsyncClient):
        response = await client.post(
            "/fitting/lorentz", json={"delta_hz": [0, 1, 2, 3, 4, 5], "reflection": [1, 1, 1, 1, 1]}
        )
        assert response.status_code == 422

    async def test_backaction_underdetermined(self, client: AsyncClient):
        response = await client.post("/fitting/backaction", json={
            "delta_hz": [-7.65e9, 7.65e9],
            "omega_eff_hz": [7.65e9, 7.65e9],
            "gamma_eff_hz": [4.91e6, 4.91e6],
            "kappa_hz": 2.47e9,
            "kappa_ex_hz": 1e9,
            "laser_frequency_hz": 195.55e12,
            "power_w": 1e-6,
        })
        assert response.status_code == 422
        assert response.json()["error"] == "UnderdeterminedFitError"


class TestMetrics:

    async def test_modes(self, client: AsyncClient):
        response = await client.get("/metrics/modes")
        assert response.status_code == 200
        modes = response.json()["modes"]
        assert modes[0]["single_photon_cooperativity"] == pytest.approx(1.89e-5, rel=0.01)
        assert modes[1]["single_photon_cooperativity"] is None

    async def test_cooperativity(self, client: AsyncClient):
        response = await client.post("/metrics/cooperativity", json={
            "g0_hz": 452e3, "linewidth_hz": 4.91e6, "kappa_hz": 2.47e9, "frequency_hz": 7.65e9,
        })
        assert response.status_code == 200
        data = response.json()
        assert data["single_photon_cooperativity"] == pytest.approx(6.74e-5, rel=0.01)
        assert data["quantum_cooperativity"] is None
