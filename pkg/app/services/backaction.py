"""
Dynamical backaction: optical spring and optomechanical damping
"""
import logging
import warnings
from typing import List

import numpy as np

from app.core.exceptions import EmptyGridError, ParametricInstabilityWarning
from app.models import BackactionPoint, Drive, MechanicalMode, OpticalCavity
from app.services.cavity import intracavity_photon_number

logger = logging.getLogger(__name__)


def _lorentz_terms(kappa: float, omega_m: float, delta):
    delta = np.asarray(delta, dtype=float)
    lower = 0.25 * kappa ** 2 + (delta - omega_m) ** 2
    upper = 0.25 * kappa ** 2 + (delta + omega_m) ** 2
    return delta, lower, upper


def delta_omega_m(cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, delta):
    """Optical spring shift of the mechanical frequency"""
    delta, lower, upper = _lorentz_terms(cavity.kappa, mech.omega_m, delta)
    n_cav = intracavity_photon_number(cavity, drive, delta)
    return mech.g0 ** 2 * n_cav * ((delta - mech.omega_m) / lower + (delta + mech.omega_m) / upper)


def delta_gamma_m(cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, delta):
    """Optomechanical damping; positive on the red-detuned side"""
    kappa = cavity.kappa
    delta, lower, upper = _lorentz_terms(kappa, mech.omega_m, delta)
    n_cav = intracavity_photon_number(cavity, drive, delta)
    return mech.g0 ** 2 * n_cav * (kappa / upper - kappa / lower)


def effective_mech_params(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, delta: float
) -> BackactionPoint:
    """Effective frequency and linewidth at one detuning, leading order in the shifts"""
    point = BackactionPoint(
        delta=float(delta),
        omega_eff=float(mech.omega_m + delta_omega_m(cavity, drive, mech, delta)),
        gamma_eff=float(mech.gamma_m + delta_gamma_m(cavity, drive, mech, delta)),
    )
    if point.unstable:
        message = f"parametric instability regime at delta = {point.delta:.4e} rad/s (gamma_eff = {point.gamma_eff:.4e})"
        logger.warning(message)
        warnings.warn(message, ParametricInstabilityWarning, stacklevel=2)
    return point


def backaction_sweep(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, delta_grid
) -> List[BackactionPoint]:
    """BackactionPoints in grid order"""
    grid = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    if grid.size == 0:
        raise EmptyGridError("detuning grid is empty")
    points = [effective_mech_params(cavity, drive, mech, d) for d in grid]
    unstable = sum(p.unstable for p in points)
    logger.info(f"backaction sweep: {grid.size} points, {unstable} unstable")
    return points
