"""
Experiment configuration schema

JSON with explicit unit suffixes; ordinary frequencies (Hz) at this boundary,
angular rates everywhere inside the services.
"""
import json
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.core.constants import hz_to_angular
from app.core.exceptions import ConfigError
from app.models import (
    Drive, Environment, Interferometer, MechanicalMode, OpticalCavity, SpectrumGrid
)
from app.services.cavity import thermal_occupation


class CavityConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    frequency_hz: float = Field(gt=0)
    kappa_0_hz: float = Field(ge=0)
    kappa_ex_hz: float = Field(gt=0)

    def to_model(self) -> OpticalCavity:
        return OpticalCavity.from_hz(self.frequency_hz, self.kappa_0_hz, self.kappa_ex_hz)


class MechanicalConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    frequency_hz: float = Field(gt=0)
    linewidth_hz: float = Field(gt=0)
    g0_hz: float = Field(default=0.0, ge=0)

    def to_model(self) -> MechanicalMode:
        return MechanicalMode.from_hz(self.frequency_hz, self.linewidth_hz, self.g0_hz)


class DriveConfig(BaseModel):
    """Laser drive; the laser defaults to the cavity frequency, the tone to the mechanical frequency"""
    model_config = ConfigDict(extra="forbid")

    laser_frequency_hz: Optional[float] = Field(default=None, gt=0)
    power_w: float = Field(ge=0)
    calibration_frequency_hz: Optional[float] = Field(default=None, ge=0)
    modulation_depth_rad: float = Field(default=0.0, ge=0)


class InterferometerConfig(BaseModel):
    """Beam splitter; ``phase_rad`` when given fixes theta + 2 k dL at the laser frequency"""
    model_config = ConfigDict(extra="forbid")

    r: float = Field(default=0.0, ge=0, lt=1)
    r_m: float = Field(default=1.0, ge=0, le=1)
    theta_rad: float = 0.0
    phase_rad: Optional[float] = None
    l1_m: float = Field(default=0.0, ge=0)
    l2_m: float = Field(default=0.0, ge=0)
    n: float = Field(default=1.0, gt=0)


class EnvironmentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    temperature_k: float = Field(default=295.0, ge=0)


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    delta_start_hz: float
    delta_stop_hz: float
    points: int = Field(ge=2)

    def grid_hz(self) -> np.ndarray:
        return np.linspace(self.delta_start_hz, self.delta_stop_hz, self.points)


class AnalyzerConfig(BaseModel):
    """Spectrum analyzer grid around the mechanical frequency"""
    model_config = ConfigDict(extra="forbid")

    span_hz: float = Field(gt=0)
    f_step_hz: float = Field(gt=0)
    enbw_hz: Optional[float] = Field(default=None, gt=0)
    noise_floor: float = Field(default=0.0, ge=0)
    averages: int = Field(default=100, ge=1)


class ExperimentConfig(BaseModel):
    """Full parameter set for simulations and the calibration pipeline"""
    model_config = ConfigDict(extra="forbid")

    cavity: CavityConfig
    mech: List[MechanicalConfig] = Field(min_length=1, max_length=3)
    drive: DriveConfig
    interferometer: InterferometerConfig = Field(default_factory=InterferometerConfig)
    environment: EnvironmentConfig = Field(default_factory=EnvironmentConfig)
    sweep: SweepConfig
    analyzer: Optional[AnalyzerConfig] = None

    @model_validator(mode="after")
    def check_linewidths(self):
        for mode in self.mech:
            if mode.linewidth_hz >= mode.frequency_hz:
                raise ValueError("mechanical linewidth must be below its frequency")
        return self

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
        return cls.from_json(text, source=str(path))

    @classmethod
    def from_json(cls, text: str, source: str = "<config>") -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}",
                detail={"line": exc.lineno, "column": exc.colno},
            ) from exc
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            first = exc.errors()[0]
            loc = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise ConfigError(
                f"{source}: {loc}: {first['msg']}",
                detail={"errors": [
                    {"loc": ".".join(str(p) for p in e["loc"]), "msg": e["msg"]} for e in exc.errors()
                ]},
            ) from exc

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def mode(self, index: int = 0) -> MechanicalConfig:
        if not 0 <= index < len(self.mech):
            raise ConfigError(f"mech.{index}: no such mode ({len(self.mech)} configured)")
        return self.mech[index]

    def cavity_model(self) -> OpticalCavity:
        return self.cavity.to_model()

    def mech_model(self, index: int = 0) -> MechanicalMode:
        return self.mode(index).to_model()

    def thermal_mech_model(self, index: int = 0) -> MechanicalMode:
        """Mode with its thermal amplitude at the configured temperature; the readout terms scale with it"""
        mech = self.mech_model(index)
        n_th = thermal_occupation(self.environment_model(), mech.omega_m)
        return MechanicalMode.thermal(mech.omega_m, mech.gamma_m, mech.g0, n_th)

    def drive_model(self, index: int = 0) -> Drive:
        laser_hz = self.drive.laser_frequency_hz or self.cavity.frequency_hz
        cal_hz = self.drive.calibration_frequency_hz
        if cal_hz is None:
            cal_hz = self.mode(index).frequency_hz
        return Drive(
            omega_L=hz_to_angular(laser_hz),
            power=self.drive.power_w,
            omega_c=hz_to_angular(cal_hz),
            phi0=self.drive.modulation_depth_rad,
        )

    def interferometer_model(self, phase_rad: Optional[float] = None) -> Interferometer:
        cfg = self.interferometer
        interf = Interferometer(r=cfg.r, r_m=cfg.r_m, theta=cfg.theta_rad, L1=cfg.l1_m, L2=cfg.l2_m, n=cfg.n)
        psi = cfg.phase_rad if phase_rad is None else phase_rad
        if psi is not None:
            interf = interf.with_phase(psi, self.drive_model().omega_L)
        return interf

    def environment_model(self) -> Environment:
        return Environment(temperature=self.environment.temperature_k)

    def detuning_grid(self) -> np.ndarray:
        """Detuning grid in rad/s"""
        return hz_to_angular(self.sweep.grid_hz())

    def spectrum_grid(self, index: int = 0) -> SpectrumGrid:
        if self.analyzer is None:
            raise ConfigError("analyzer: section required for spectrum synthesis")
        return SpectrumGrid.centered(
            self.mode(index).frequency_hz, self.analyzer.span_hz, self.analyzer.f_step_hz, self.analyzer.enbw_hz
        )
