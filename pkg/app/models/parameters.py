"""
Physical parameter records

All rates and frequencies are angular (rad/s). Conversion from ordinary
frequency happens at the configuration boundary.
"""
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.constants import HBAR, hz_to_angular


class OpticalCavity(BaseModel):
    """Optical mode with intrinsic and external loss channels"""
    model_config = ConfigDict(frozen=True)

    omega_o: float = Field(gt=0)
    kappa_0: float = Field(ge=0)
    kappa_ex: float = Field(gt=0)

    @property
    def kappa(self) -> float:
        return self.kappa_0 + self.kappa_ex

    @property
    def eta_c(self) -> float:
        """Coupling efficiency kappa_ex / kappa"""
        return self.kappa_ex / self.kappa

    @classmethod
    def from_hz(cls, frequency_hz: float, kappa_0_hz: float, kappa_ex_hz: float) -> "OpticalCavity":
        return cls(
            omega_o=hz_to_angular(frequency_hz),
            kappa_0=hz_to_angular(kappa_0_hz),
            kappa_ex=hz_to_angular(kappa_ex_hz),
        )


class MechanicalMode(BaseModel):
    """Mechanical mode and its coherent displacement amplitude x_m"""
    model_config = ConfigDict(frozen=True)

    omega_m: float = Field(gt=0)
    gamma_m: float = Field(gt=0)
    g0: float = Field(ge=0)
    x_m_real: float = 0.0
    x_m_imag: float = 0.0

    @property
    def x_m(self) -> complex:
        return complex(self.x_m_real, self.x_m_imag)

    @classmethod
    def thermal(cls, omega_m: float, gamma_m: float, g0: float, n_th: float) -> "MechanicalMode":
        """
        Mode whose amplitude represents a thermal state of occupation n_th.

        Uses |x_m|^2 = (2 n_th + 1) / 2 so that <x^2> = 2 |x_m|^2 = 2 n_th + 1.
        """
        if n_th < 0:
            raise ValueError("n_th must be non-negative")
        return cls(omega_m=omega_m, gamma_m=gamma_m, g0=g0, x_m_real=math.sqrt((2.0 * n_th + 1.0) / 2.0))

    @classmethod
    def from_hz(
        cls, frequency_hz: float, linewidth_hz: float, g0_hz: float, x_m: complex = 0j
    ) -> "MechanicalMode":
        return cls(
            omega_m=hz_to_angular(frequency_hz),
            gamma_m=hz_to_angular(linewidth_hz),
            g0=hz_to_angular(g0_hz),
            x_m_real=x_m.real,
            x_m_imag=x_m.imag,
        )


def _carrier_wavenumber(interf: "Interferometer", omega_L: float) -> float:
    # app.services.cavity imports this module
    from app.services.cavity import carrier_wavenumber
    return carrier_wavenumber(interf, omega_L)


class Interferometer(BaseModel):
    """Parasitic beam splitter plus mirror in front of the cavity"""
    model_config = ConfigDict(frozen=True)

    r: float = Field(default=0.0, ge=0, lt=1)
    r_m: float = Field(default=1.0, ge=0, le=1)
    theta: float = 0.0
    L1: float = Field(default=0.0, ge=0)
    L2: float = Field(default=0.0, ge=0)
    n: float = Field(default=1.0, gt=0)

    @property
    def t(self) -> float:
        return math.sqrt(1.0 - self.r ** 2)

    @property
    def delta_L(self) -> float:
        return self.L1 - self.L2

    def phase(self, omega_L: float) -> float:
        """Interferometer phase psi = theta + 2 k dL at the carrier"""
        return self.theta + 2.0 * _carrier_wavenumber(self, omega_L) * self.delta_L

    def with_phase(self, psi: float, omega_L: float) -> "Interferometer":
        """Copy whose mirror phase is chosen so that theta + 2 k dL = psi"""
        theta = psi - 2.0 * _carrier_wavenumber(self, omega_L) * self.delta_L
        return self.model_copy(update={"theta": theta})


class Drive(BaseModel):
    """Laser drive with a phase-modulation calibration tone"""
    model_config = ConfigDict(frozen=True)

    omega_L: float = Field(gt=0)
    power: float = Field(ge=0)
    omega_c: float = Field(default=0.0, ge=0)
    phi0: float = Field(default=0.0, ge=0)

    @property
    def s0(self) -> float:
        """Photon-flux amplitude sqrt(P / hbar omega_L), units s^-1/2"""
        return math.sqrt(self.power / (HBAR * self.omega_L))

    @property
    def s_c(self) -> float:
        """First-order sideband amplitude, valid for phi0 << 1"""
        return 0.5 * self.phi0 * self.s0


class Environment(BaseModel):
    """Bath temperature"""
    model_config = ConfigDict(frozen=True)

    temperature: float = Field(ge=0)


class MeasuredMode(BaseModel):
    """Measured parameters of one mechanical mode, ordinary frequency units"""
    model_config = ConfigDict(frozen=True)

    name: str
    frequency_hz: float = Field(gt=0)
    linewidth_hz: float = Field(gt=0)
    g0_hz: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_resolvable(self):
        if self.linewidth_hz >= self.frequency_hz:
            raise ValueError("mechanical linewidth must be below its frequency")
        return self
