"""
Steady-state intracavity sideband amplitudes
"""
import logging
import warnings

import numpy as np

from app.core.config import settings
from app.core.exceptions import SidebandOverlapWarning
from app.models import Drive, Interferometer, MechanicalMode, OpticalCavity, SteadyStateAmplitudes
from app.services.cavity import carrier_wavenumber, path_phase, susceptibility

logger = logging.getLogger(__name__)


def check_sideband_overlap(drive: Drive, mech: MechanicalMode, factor: float | None = None) -> bool:
    """Warn when the calibration tone sits within a few mechanical linewidths"""
    factor = settings.SIDEBAND_OVERLAP_FACTOR if factor is None else factor
    if drive.phi0 > 0 and mech.g0 > 0 and abs(mech.omega_m - drive.omega_c) < factor * mech.gamma_m:
        message = (
            f"|Omega_m - Omega_c| = {abs(mech.omega_m - drive.omega_c):.3e} rad/s is below "
            f"{factor:g} Gamma_m; single-frequency mechanical motion is assumed"
        )
        logger.debug(message)
        warnings.warn(message, SidebandOverlapWarning, stacklevel=3)
        return True
    return False


def steady_state(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, delta
) -> SteadyStateAmplitudes:
    """
    Intracavity amplitudes for a drive at the cavity input.

    The mechanical displacement x_m is an input: the mechanical equation of
    motion is not solved self-consistently.
    """
    check_sideband_overlap(drive, mech)
    root_kex = np.sqrt(cavity.kappa_ex)
    s0, s_c = drive.s0, drive.s_c
    x_m = mech.x_m
    chi_0 = susceptibility(cavity, delta, 0.0)

    return SteadyStateAmplitudes(
        a0=root_kex * s0 * chi_0,
        a_minus_c=root_kex * s_c * susceptibility(cavity, delta, drive.omega_c),
        a_plus_c=-root_kex * s_c * susceptibility(cavity, delta, -drive.omega_c),
        a_minus_m=1j * root_kex * mech.g0 * x_m * s0 * chi_0 * susceptibility(cavity, delta, mech.omega_m),
        a_plus_m=1j * root_kex * mech.g0 * np.conj(x_m) * s0 * chi_0 * susceptibility(cavity, delta, -mech.omega_m),
    )


def steady_state_shifted(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer, delta
) -> SteadyStateAmplitudes:
    """Steady state for the drive after transmission through the splitter and path L2"""
    bare = steady_state(cavity, drive, mech, delta)
    carrier = interf.t * np.exp(1j * carrier_wavenumber(interf, drive.omega_L) * interf.L2)
    phi2_c = path_phase(interf, 2, drive.omega_c)

    return SteadyStateAmplitudes(
        a0=carrier * bare.a0,
        a_minus_c=carrier * np.exp(1j * phi2_c) * bare.a_minus_c,
        a_plus_c=carrier * np.exp(-1j * phi2_c) * bare.a_plus_c,
        a_minus_m=carrier * bare.a_minus_m,
        a_plus_m=carrier * bare.a_plus_m,
    )
