"""
Two-path beam splitter model of parasitic back reflection

The detected field is the sum of a mirror path (residual reflection at the
fiber-waveguide junction) and the cavity path. All coefficients are quoted
with the common propagation phase e^{2ikL2} removed.
"""
import logging
import math
from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    CalibrationToneTooSmallError, EmptyGridError, UndefinedFanoParameterError
)
from app.models import (
    Drive, FanoParameters, G0BiasSweep, Interferometer, MechanicalMode,
    OpticalCavity, OutputCoefficients
)
from app.services.cavity import carrier_wavenumber, path_phase, susceptibility
from app.services.sideband import steady_state_shifted

logger = logging.getLogger(__name__)

# cos(psi) = -sin(psi)^2  <=>  c^2 - c - 1 = 0, root with |c| <= 1
FANO_CONSTRAINT_COS = (1.0 - math.sqrt(5.0)) / 2.0


def output_coefficients(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer, delta
) -> OutputCoefficients:
    """
    Carrier A, calibration (B_c, C_c) and mechanical (B_m, C_m) components of the output.

    The mechanical sidebands are driven by the carrier amplitude s0.
    """
    kex = cavity.kappa_ex
    s0, s_c = drive.s0, drive.s_c
    t2 = interf.t ** 2
    mirror = interf.r ** 2 * interf.r_m
    psi = interf.phase(drive.omega_L)
    phi1_c = path_phase(interf, 1, drive.omega_c)
    phi2_c = path_phase(interf, 2, drive.omega_c)
    phi2_m = path_phase(interf, 2, mech.omega_m)

    chi_0 = susceptibility(cavity, delta, 0.0)
    chi_pc = susceptibility(cavity, delta, drive.omega_c)
    chi_mc = susceptibility(cavity, delta, -drive.omega_c)
    chi_pm = susceptibility(cavity, delta, mech.omega_m)
    chi_mm = susceptibility(cavity, delta, -mech.omega_m)

    a_carrier = (mirror * np.exp(1j * psi) + t2 * (1.0 - kex * chi_0)) * s0
    b_cal = (
        mirror * np.exp(1j * (psi + 2.0 * phi1_c))
        + t2 * (1.0 - kex * chi_pc) * np.exp(2j * phi2_c)
    ) * s_c
    c_cal = -(
        mirror * np.exp(1j * (psi - 2.0 * phi1_c))
        + t2 * (1.0 - kex * chi_mc) * np.exp(-2j * phi2_c)
    ) * s_c
    mech_scale = -1j * t2 * kex * mech.g0 * chi_0 * s0
    b_mech = mech_scale * mech.x_m * chi_pm * np.exp(1j * phi2_m)
    c_mech = mech_scale * np.conj(mech.x_m) * chi_mm * np.exp(-1j * phi2_m)

    return OutputCoefficients(a_carrier, b_cal, c_cal, b_mech, c_mech)


def output_coefficients_path_sum(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer, delta
) -> OutputCoefficients:
    """Same coefficients built by propagating each path and adding them at the splitter"""
    k = carrier_wavenumber(interf, drive.omega_L)
    t, r = interf.t, interf.r
    s0, s_c = drive.s0, drive.s_c
    root_kex = np.sqrt(cavity.kappa_ex)
    phi1_c = path_phase(interf, 1, drive.omega_c)
    phi2_c = path_phase(interf, 2, drive.omega_c)
    phi2_m = path_phase(interf, 2, mech.omega_m)
    intra = steady_state_shifted(cavity, drive, mech, interf, delta)

    # Field reaching the cavity and its phase on the way back, per component
    inputs = (
        t * s0 * np.exp(1j * k * interf.L2),
        t * s_c * np.exp(1j * (k * interf.L2 + phi2_c)),
        -t * s_c * np.exp(1j * (k * interf.L2 - phi2_c)),
        0.0,
        0.0,
    )
    returns = (
        np.exp(1j * k * interf.L2),
        np.exp(1j * (k * interf.L2 + phi2_c)),
        np.exp(1j * (k * interf.L2 - phi2_c)),
        np.exp(1j * (k * interf.L2 + phi2_m)),
        np.exp(1j * (k * interf.L2 - phi2_m)),
    )
    mirror_in = (s0, s_c * np.exp(2j * phi1_c), -s_c * np.exp(-2j * phi1_c), 0.0, 0.0)
    mirror_gain = r * r * interf.r_m * np.exp(1j * (interf.theta + 2.0 * k * interf.L1))
    common = np.exp(-2j * k * interf.L2)

    total = []
    for s_in, back, a, m_in in zip(inputs, returns, intra.components(), mirror_in):
        cavity_out = s_in - root_kex * a
        total.append((mirror_gain * m_in + t * cavity_out * back) * common)
    return OutputCoefficients(*total)


def beat_amplitude(coeffs: OutputCoefficients, which: str):
    """Complex intensity-modulation amplitude A* B + A C* at the selected tone"""
    if which == "cal":
        b, c = coeffs.b_cal, coeffs.c_cal
    elif which == "mech":
        b, c = coeffs.b_mech, coeffs.c_mech
    else:
        raise ValueError(f"which must be 'cal' or 'mech', got {which!r}")
    a = coeffs.a_carrier
    return np.conj(a) * b + a * np.conj(c)


def calibration_threshold(drive: Drive, interf: Interferometer, rel: float | None = None) -> float:
    """Smallest detectable calibration beat magnitude"""
    rel = settings.CAL_THRESHOLD_REL if rel is None else rel
    return rel * drive.s0 ** 2 * interf.t ** 2


def eta_g_sweep(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer, delta,
    cal_threshold_rel: float | None = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized mechanics/calibration power ratio; returns (eta_g, skipped mask)"""
    coeffs = output_coefficients(cavity, drive, mech, interf, delta)
    mech_beat = np.atleast_1d(beat_amplitude(coeffs, "mech"))
    cal_beat = np.atleast_1d(beat_amplitude(coeffs, "cal"))
    skipped = np.abs(cal_beat) < calibration_threshold(drive, interf, cal_threshold_rel)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.abs(mech_beat) ** 2 / np.abs(cal_beat) ** 2
    eta = np.where(skipped, np.nan, eta)
    return eta, skipped


def eta_g(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer, delta: float,
    cal_threshold_rel: float | None = None,
) -> float:
    """Mechanics/calibration power ratio at one detuning; proportional to the apparent g0^2"""
    eta, skipped = eta_g_sweep(cavity, drive, mech, interf, delta, cal_threshold_rel)
    if skipped[0]:
        raise CalibrationToneTooSmallError(
            "calibration tone too small to detect",
            detail={"delta": float(delta)},
        )
    return float(eta[0])


def reflection_exact(cavity: OpticalCavity, drive: Drive, interf: Interferometer, delta):
    """Detected carrier photon flux |A(delta)|^2"""
    t2 = interf.t ** 2
    mirror = interf.r ** 2 * interf.r_m
    psi = interf.phase(drive.omega_L)
    a = (mirror * np.exp(1j * psi) + t2 * (1.0 - cavity.kappa_ex * susceptibility(cavity, delta, 0.0))) * drive.s0
    return np.abs(a) ** 2


def reflection_expanded(cavity: OpticalCavity, drive: Drive, interf: Interferometer, delta):
    """
    Constant-plus-Fano expansion of |A|^2.

    Drops the delta-independent t^4 sin(psi)^2 term; the fitted offset
    absorbs it. The q' (1 - eta_c) factor is multiplied out so the
    overcoupled limit stays finite.
    """
    delta = np.asarray(delta, dtype=float)
    kappa, eta = cavity.kappa, cavity.eta_c
    t2 = interf.t ** 2
    mirror = interf.r ** 2 * interf.r_m
    psi = interf.phase(drive.omega_L)
    lorentz = 1.0 / ((0.5 * kappa) ** 2 + delta ** 2)

    constant = (abs(mirror) + t2 * np.cos(psi)) ** 2
    resonant = 2.0 * t2 ** 2 * kappa * (eta - eta ** 2) * 0.5 * kappa
    interference = 2.0 * t2 * kappa * eta * mirror * (0.5 * kappa * np.cos(psi) + delta * np.sin(psi))
    return drive.s0 ** 2 * (constant - (resonant + interference) * lorentz)


def fano_constraint_roots() -> Tuple[float, Tuple[float, float]]:
    """Solutions of cos(psi) = -sin(psi)^2 as (cos psi, (psi_-, psi_+))"""
    psi = math.acos(FANO_CONSTRAINT_COS)
    return FANO_CONSTRAINT_COS, (-psi, psi)


def fano_identification(cavity: OpticalCavity, drive: Drive, interf: Interferometer) -> FanoParameters:
    """Map interferometer parameters onto the offset, amplitude and Fano q of the reflection fit"""
    eta = cavity.eta_c
    if math.isclose(eta, 1.0, rel_tol=0.0, abs_tol=1e-15):
        raise UndefinedFanoParameterError("overcoupled-limit undefined q (eta_c = 1)")
    s0_sq = drive.s0 ** 2
    t2 = interf.t ** 2
    mirror = interf.r ** 2 * interf.r_m
    psi = interf.phase(drive.omega_L)
    q_prime = mirror / (t2 * (1.0 - eta))
    cos_root, psi_roots = fano_constraint_roots()

    return FanoParameters(
        h=s0_sq * (abs(mirror) + t2 * math.cos(psi)) ** 2,
        a_amp=2.0 * s0_sq * t2 ** 2 * cavity.kappa * (eta - eta ** 2),
        q=q_prime * math.sin(psi),
        psi=psi,
        q_prime=q_prime,
        cos_psi_root=cos_root,
        psi_roots=psi_roots,
    )


def fano_model(delta, h: float, a_amp: float, q: float, kappa: float, delta0: float = 0.0):
    """Reflection lineshape R = h - A ((1 - q^2) kappa/2 - q u) / (kappa^2/4 + u^2), u = delta - delta0"""
    u = np.asarray(delta, dtype=float) - delta0
    return h - a_amp * ((1.0 - q ** 2) * 0.5 * kappa - q * u) / (0.25 * kappa ** 2 + u ** 2)


def g0_bias_sweep(
    cavity: OpticalCavity, drive: Drive, mech: MechanicalMode, interf: Interferometer,
    delta_grid, g0_true: float | None = None, cal_threshold_rel: float | None = None,
) -> G0BiasSweep:
    """
    Apparent g0 over detuning, normalized by the same sweep without back reflection.

    Points where either calibration beat falls below the detectability
    threshold are omitted and listed in ``skipped``.
    """
    delta = np.atleast_1d(np.asarray(delta_grid, dtype=float))
    if delta.size == 0:
        raise EmptyGridError("detuning grid is empty")
    g0_true = mech.g0 if g0_true is None else g0_true
    mech = mech.model_copy(update={"g0": g0_true})
    reference = interf.model_copy(update={"r": 0.0})

    eta, skipped = eta_g_sweep(cavity, drive, mech, interf, delta, cal_threshold_rel)
    eta_ref, skipped_ref = eta_g_sweep(cavity, drive, mech, reference, delta, cal_threshold_rel)

    skips = []
    for i in np.flatnonzero(skipped | skipped_ref):
        reason = "calibration tone too small" if skipped[i] else "reference calibration tone too small"
        skips.append((float(delta[i]), reason))

    with np.errstate(divide="ignore", invalid="ignore"):
        g0_measured = g0_true * np.sqrt(eta / eta_ref)
    g0_measured = np.where(skipped | skipped_ref, np.nan, g0_measured)

    logger.info(f"g0 bias sweep: {delta.size} points, {len(skips)} skipped, r = {interf.r:g}")
    return G0BiasSweep(delta=delta, eta_g=eta, eta_g_ref=eta_ref, g0_measured=g0_measured, skipped=skips)
