"""
Test configuration and fixtures
"""
import json
import math
from pathlib import Path
from typing import AsyncGenerator

import pytest
from httpx import ASGITransport, AsyncClient

from app.core.constants import hz_to_angular
from app.main import app
from app.models import Drive, Environment, Interferometer, MechanicalMode, OpticalCavity
from app.schemas.config import ExperimentConfig

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

LASER_HZ = 195.55e12
PHASE_077PI = 0.77 * math.pi


@pytest.fixture
def backrefl_cavity() -> OpticalCavity:
    """Cavity of the back-reflection study: kappa_0 = 1.5 GHz, kappa_ex = 1 GHz"""
    return OpticalCavity.from_hz(LASER_HZ, 1.5e9, 1.0e9)


@pytest.fixture
def backrefl_mech() -> MechanicalMode:
    return MechanicalMode.from_hz(7.65e9, 4.91e6, 452e3, x_m=1.0 + 0j)


@pytest.fixture
def backrefl_drive() -> Drive:
    """Calibration tone on top of the mechanical frequency"""
    return Drive(omega_L=hz_to_angular(LASER_HZ), power=1e-6, omega_c=hz_to_angular(7.65e9), phi0=0.05)


@pytest.fixture
def backrefl_interferometer(backrefl_drive: Drive) -> Interferometer:
    """r = 0.2 splitter, dL = -140 um in n = 3.05, phase 0.77 pi"""
    interf = Interferometer(r=0.2, r_m=1.0, L1=0.0, L2=140e-6, n=3.05)
    return interf.with_phase(PHASE_077PI, backrefl_drive.omega_L)


@pytest.fixture
def mode3_cavity() -> OpticalCavity:
    """kappa = 2.47 GHz, kappa_ex = 1 GHz"""
    return OpticalCavity.from_hz(LASER_HZ, 1.47e9, 1.0e9)


@pytest.fixture
def mode3_mech() -> MechanicalMode:
    return MechanicalMode.from_hz(7.65e9, 4.91e6, 452e3)


@pytest.fixture
def mode3_drive() -> Drive:
    return Drive(omega_L=hz_to_angular(LASER_HZ), power=10e-6)


@pytest.fixture
def room_temperature() -> Environment:
    return Environment(temperature=295.0)


@pytest.fixture
def backrefl_config() -> ExperimentConfig:
    return ExperimentConfig.from_file(CONFIG_DIR / "back_reflection.json")


@pytest.fixture
def mode3_config() -> ExperimentConfig:
    return ExperimentConfig.from_file(CONFIG_DIR / "mode3.json")


@pytest.fixture
def backrefl_config_data() -> dict:
    return json.loads((CONFIG_DIR / "back_reflection.json").read_text())


@pytest.fixture
def mode3_config_data() -> dict:
    return json.loads((CONFIG_DIR / "mode3.json").read_text())


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict to a temporary JSON file and return its path"""
    def _write(data: dict, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path
    return _write


@pytest.fixture
async def client() -> AsyncGenerator[AsyncClient, None]:
    """Create a test client"""
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        yield ac
