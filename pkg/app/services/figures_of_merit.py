"""
Figures of merit derived from measured mode parameters
"""
from typing import List

from app.core.exceptions import InvalidParameterError
from app.models import MeasuredMode

# Measured optomechanical crystal modes; mode 2 has no coupling rate on record
REFERENCE_MODES = (
    MeasuredMode(name="mode 1", frequency_hz=5.71e9, linewidth_hz=4.57e6, g0_hz=231e3),
    MeasuredMode(name="mode 2", frequency_hz=6.50e9, linewidth_hz=3.93e6, g0_hz=None),
    MeasuredMode(name="mode 3", frequency_hz=7.65e9, linewidth_hz=4.91e6, g0_hz=452e3),
)

REFERENCE_KAPPA_HZ = 2.47e9
REFERENCE_OPTICAL_FREQUENCY_HZ = 195.55e12


def single_photon_cooperativity(g0: float, gamma_m: float, kappa: float) -> float:
    """C0 = 4 g0^2 / (Gamma_m kappa); any consistent frequency unit"""
    if not (gamma_m > 0 and kappa > 0):
        raise InvalidParameterError("linewidths must be positive")
    return 4.0 * g0 ** 2 / (gamma_m * kappa)


def quantum_cooperativity(n_cav: float, c0: float, n_th: float) -> float:
    if not n_th > 0:
        raise InvalidParameterError(f"n_th must be positive, got {n_th}")
    return n_cav * c0 / n_th


def sideband_resolution(omega_m: float, kappa: float) -> float:
    """Omega_m / kappa; above one in the resolved-sideband regime"""
    if not kappa > 0:
        raise InvalidParameterError("kappa must be positive")
    return omega_m / kappa


def loaded_quality_factor(omega_o: float, kappa: float) -> float:
    if not kappa > 0:
        raise InvalidParameterError("kappa must be positive")
    return omega_o / kappa


def reference_modes() -> List[MeasuredMode]:
    return list(REFERENCE_MODES)


def mode_report(
    mode: MeasuredMode, kappa_hz: float = REFERENCE_KAPPA_HZ, optical_frequency_hz: float = REFERENCE_OPTICAL_FREQUENCY_HZ
) -> dict:
    """Cooperativity, sideband resolution and quality factors of one measured mode"""
    report = {
        "name": mode.name,
        "frequency_hz": mode.frequency_hz,
        "linewidth_hz": mode.linewidth_hz,
        "g0_hz": mode.g0_hz,
        "mechanical_quality_factor": mode.frequency_hz / mode.linewidth_hz,
        "sideband_resolution": sideband_resolution(mode.frequency_hz, kappa_hz),
        "loaded_quality_factor": loaded_quality_factor(optical_frequency_hz, kappa_hz),
        "single_photon_cooperativity": None,
    }
    if mode.g0_hz is not None:
        report["single_photon_cooperativity"] = single_photon_cooperativity(mode.g0_hz, mode.linewidth_hz, kappa_hz)
    return report
