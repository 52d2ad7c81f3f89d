"""
Core cavity model: susceptibility, photon number, thermal occupation, propagation phases
"""
import numpy as np

from app.core.constants import C, HBAR, K_B
from app.core.exceptions import InvalidParameterError
from app.models import Drive, Environment, Interferometer, OpticalCavity


def susceptibility(cavity: OpticalCavity, delta, omega=0.0):
    """
    Optical susceptibility chi(omega) = 1 / (kappa/2 - i (delta + omega)).

    delta and omega may be scalars or numpy arrays (broadcast together).
    """
    kappa = cavity.kappa
    if not kappa > 0:
        raise InvalidParameterError(f"total loss rate must be positive, got {kappa}")
    return 1.0 / (0.5 * kappa - 1j * (np.asarray(delta) + omega))


def intracavity_photon_number(cavity: OpticalCavity, drive: Drive, delta):
    """Mean intracavity photon number kappa_ex P / (hbar omega_L (delta^2 + kappa^2/4))"""
    delta = np.asarray(delta, dtype=float)
    return cavity.kappa_ex * drive.power / (HBAR * drive.omega_L * (delta ** 2 + (0.5 * cavity.kappa) ** 2))


def thermal_occupation(env: Environment, omega_m: float) -> float:
    """High-temperature phonon occupation k_B T / (hbar Omega_m)"""
    if not omega_m > 0:
        raise InvalidParameterError(f"mechanical frequency must be positive, got {omega_m}")
    return K_B * env.temperature / (HBAR * omega_m)


def path_phase(interf: Interferometer, which: int, omega):
    """Sideband propagation phase n L_j Omega / c for path 1 (mirror) or 2 (cavity)"""
    if which == 1:
        length = interf.L1
    elif which == 2:
        length = interf.L2
    else:
        raise InvalidParameterError(f"path index must be 1 or 2, got {which!r}")
    return interf.n * length * np.asarray(omega) / C


def carrier_wavenumber(interf: Interferometer, omega_L: float) -> float:
    """k = n omega_L / c"""
    return interf.n * omega_L / C
