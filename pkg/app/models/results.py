"""
Computed result records
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.core.constants import angular_to_hz

ComplexLike = Union[complex, np.ndarray]
RealLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SteadyStateAmplitudes:
    """Intracavity field components at carrier, calibration and mechanical sidebands"""
    a0: ComplexLike
    a_minus_c: ComplexLike
    a_plus_c: ComplexLike
    a_minus_m: ComplexLike
    a_plus_m: ComplexLike

    def components(self) -> Tuple[ComplexLike, ...]:
        return (self.a0, self.a_minus_c, self.a_plus_c, self.a_minus_m, self.a_plus_m)


@dataclass(frozen=True)
class OutputCoefficients:
    """Detected field after the beam splitter, common phase e^{2ikL2} removed"""
    a_carrier: ComplexLike
    b_cal: ComplexLike
    c_cal: ComplexLike
    b_mech: ComplexLike
    c_mech: ComplexLike

    def components(self) -> Tuple[ComplexLike, ...]:
        return (self.a_carrier, self.b_cal, self.c_cal, self.b_mech, self.c_mech)


@dataclass(frozen=True)
class BackactionPoint:
    """Effective mechanical frequency and damping at one detuning"""
    delta: float
    omega_eff: float
    gamma_eff: float

    @property
    def unstable(self) -> bool:
        """Parametric instability regime"""
        return self.gamma_eff <= 0


@dataclass(frozen=True)
class FanoParameters:
    """Reflection lineshape parameters identified from the interferometer model"""
    h: float
    a_amp: float
    q: float
    psi: float
    q_prime: float
    cos_psi_root: float
    psi_roots: Tuple[float, float]

    @property
    def identification_residual(self) -> float:
        """
        Mismatch between 1 + q' cos(psi) and 1 - q^2; zero only when the
        constraint cos(psi) = -sin(psi)^2 holds with q' = 1.
        """
        return (1.0 + self.q_prime * np.cos(self.psi)) - (1.0 - self.q ** 2)


@dataclass
class G0BiasSweep:
    """Apparent g0 over detuning with skipped points recorded"""
    delta: np.ndarray
    eta_g: np.ndarray
    eta_g_ref: np.ndarray
    g0_measured: np.ndarray
    skipped: List[Tuple[float, str]] = field(default_factory=list)

    @property
    def points(self) -> List[Tuple[float, float]]:
        mask = np.isfinite(self.g0_measured)
        return list(zip(self.delta[mask].tolist(), self.g0_measured[mask].tolist()))

    def peak_to_peak(self) -> float:
        """Peak-to-peak spread of g0_measured relative to its mean"""
        values = self.g0_measured[np.isfinite(self.g0_measured)]
        if values.size == 0:
            return float("nan")
        return float((values.max() - values.min()) / values.mean())


class SpectrumGrid(BaseModel):
    """Uniform analyzer frequency grid, ordinary frequency"""
    model_config = ConfigDict(frozen=True)

    f_start_hz: float
    f_step_hz: float = Field(gt=0)
    points: int = Field(ge=2)
    enbw_hz: float = Field(gt=0)

    def frequencies(self) -> np.ndarray:
        return self.f_start_hz + self.f_step_hz * np.arange(self.points)

    @classmethod
    def centered(cls, center_hz: float, span_hz: float, f_step_hz: float, enbw_hz: float | None = None) -> "SpectrumGrid":
        points = int(np.floor(span_hz / f_step_hz)) + 1
        return cls(
            f_start_hz=center_hz - 0.5 * (points - 1) * f_step_hz,
            f_step_hz=f_step_hz,
            points=points,
            enbw_hz=enbw_hz or f_step_hz,
        )


@dataclass(frozen=True)
class SpectrumTrace:
    """Detector power spectral density on a uniform grid (per Hz)"""
    f_start: float
    f_step: float
    values: np.ndarray
    enbw: float

    def __post_init__(self):
        if not self.f_step > 0:
            raise ValueError("f_step must be positive")
        if not self.enbw > 0:
            raise ValueError("enbw must be positive")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ValueError("trace needs at least two samples")
        if not np.all(np.isfinite(values)):
            raise ValueError("trace values must be finite")
        object.__setattr__(self, "values", values)

    @property
    def frequencies(self) -> np.ndarray:
        return self.f_start + self.f_step * np.arange(self.values.size)

    @property
    def f_stop(self) -> float:
        return self.f_start + self.f_step * (self.values.size - 1)

    def contains(self, f_hz: float) -> bool:
        return self.f_start <= f_hz <= self.f_stop


class G0Estimate(BaseModel):
    """Calibration-tone estimate of the vacuum coupling rate"""
    g0: float = Field(ge=0)
    s_mech_peak: float
    s_cal_peak: float
    gamma_m_used: float
    n_th_used: float

    @property
    def g0_hz(self) -> float:
        return angular_to_hz(self.g0)


@dataclass
class FitResult:
    """Outcome of a nonlinear least-squares fit"""
    param_names: List[str]
    values: np.ndarray
    covariance: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    cost_history: List[float] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)

    @property
    def params(self) -> Dict[str, float]:
        return {name: float(v) for name, v in zip(self.param_names, self.values)}

    @property
    def stderr(self) -> Dict[str, float]:
        diag = np.clip(np.diag(self.covariance), 0.0, None)
        return {name: float(v) for name, v in zip(self.param_names, np.sqrt(diag))}

    def report(self) -> dict:
        return {
            "params": self.params,
            "stderr": self.stderr,
            "residual_norm": float(self.residual_norm),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "flags": list(self.flags),
        }
