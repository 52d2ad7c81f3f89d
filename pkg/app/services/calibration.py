"""
Calibration-tone g0 estimator and detector spectrum synthesis
"""
import logging
import warnings
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from app.core.config import settings
from app.core.constants import TWO_PI
from app.core.exceptions import (
    DataError, FrequencyOutOfRangeError, InvalidParameterError, OptomechWarning,
    PeakNotDetectedError, UnderResolvedError
)
from app.models import (
    Drive, Environment, G0Estimate, Interferometer, MechanicalMode, OpticalCavity,
    SpectrumGrid, SpectrumTrace
)
from app.services.backaction import effective_mech_params
from app.services.cavity import thermal_occupation
from app.services.fitting import nlls_solve
from app.services.interferometer import beat_amplitude, output_coefficients
from app.services.tables import read_numeric_csv, write_csv

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["frequency_hz", "psd"]


def lorentzian_peak(f, floor: float, peak: float, center: float, fwhm: float):
    """Floor plus a Lorentzian of height ``peak`` and full width ``fwhm``"""
    return floor + peak / (1.0 + ((np.asarray(f) - center) / (0.5 * fwhm)) ** 2)


def _fit_mechanical_peak(trace: SpectrumTrace, f_m: float, f_c: float, width_hz: float,
                         window_linewidths: float, cal_window_hz: float):
    freqs = trace.frequencies
    offsets = freqs - f_m
    mask = (np.abs(offsets) <= window_linewidths * width_hz) & (np.abs(freqs - f_c) > cal_window_hz)
    x, y = offsets[mask], trace.values[mask]
    if x.size < 4:
        raise PeakNotDetectedError(
            f"only {x.size} bins around the mechanical peak at {f_m:.6e} Hz",
            detail={"frequency_hz": f_m},
        )

    edge = max(1, x.size // 10)
    floor0 = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
    idx = int(np.argmax(y))
    peak0 = float(y[idx] - floor0)
    if peak0 <= 0:
        return floor0, 0.0, 0.0, width_hz

    def model(p, f):
        return lorentzian_peak(f, p[0], p[1], p[2], p[3])

    p0 = [floor0, peak0, float(x[idx]), width_hz]
    scales = [abs(floor0) or peak0, peak0, width_hz, width_hz]
    fit = nlls_solve(model, x, y, p0, param_names=["floor", "peak", "center", "fwhm"], scales=scales)
    floor, peak, center, fwhm = fit.values
    if not fit.converged:
        logger.warning(f"mechanical peak fit stopped after {fit.iterations} iterations")
    return float(floor), float(peak), float(center), abs(float(fwhm))


def estimate_g0(
    trace: SpectrumTrace,
    omega_m: float,
    omega_c: float,
    gamma_m: float,
    phi0: float,
    n_th: float,
    *,
    window_linewidths: float | None = None,
    cal_window_enbw: float | None = None,
) -> G0Estimate:
    """
    g0 from the ratio of the mechanical peak area to the calibration tone power.

    g0^2 = phi0^2 Omega_c^2 / (4 n_th) * (S_mech Gamma_m / 4) / (S_cal f_ENBW),
    with the PSD per Hz, Gamma_m angular and f_ENBW in Hz.
    """
    window_linewidths = settings.MECH_FIT_WINDOW_LINEWIDTHS if window_linewidths is None else window_linewidths
    cal_window_enbw = settings.CAL_WINDOW_ENBW if cal_window_enbw is None else cal_window_enbw
    if not n_th > 0:
        raise InvalidParameterError(f"n_th must be positive, got {n_th}")
    if not phi0 > 0:
        raise InvalidParameterError(f"modulation depth must be positive, got {phi0}")
    if not gamma_m > 0:
        raise InvalidParameterError(f"mechanical linewidth must be positive, got {gamma_m}")

    f_m, f_c = omega_m / TWO_PI, omega_c / TWO_PI
    for label, f in (("mechanical", f_m), ("calibration", f_c)):
        if not trace.contains(f):
            raise FrequencyOutOfRangeError(
                f"{label} frequency {f:.6e} Hz outside trace span [{trace.f_start:.6e}, {trace.f_stop:.6e}] Hz",
                detail={"frequency_hz": f},
            )

    cal_window_hz = max(cal_window_enbw * trace.enbw, trace.f_step)
    floor, s_mech, center, fwhm = _fit_mechanical_peak(
        trace, f_m, f_c, gamma_m / TWO_PI, window_linewidths, cal_window_hz
    )

    freqs = trace.frequencies
    near_tone = np.flatnonzero(np.abs(freqs - f_c) <= cal_window_hz)
    tone_idx = int(near_tone[np.argmax(trace.values[near_tone])])
    background = floor
    if s_mech > 0:
        background = lorentzian_peak(freqs[tone_idx] - f_m, floor, s_mech, center, fwhm)
    s_cal = float(trace.values[tone_idx] - background)
    if not s_cal > settings.PEAK_DETECTION_REL * abs(background):
        raise PeakNotDetectedError(
            f"calibration tone at {f_c:.6e} Hz not above the background",
            detail={"frequency_hz": f_c},
        )

    if s_mech <= 0:
        message = f"no mechanical peak above the floor near {f_m:.6e} Hz; reporting g0 = 0"
        logger.warning(message)
        warnings.warn(message, OptomechWarning, stacklevel=2)
        s_mech = 0.0

    ratio = (s_mech * gamma_m / 4.0) / (s_cal * trace.enbw)
    g0 = float(np.sqrt(phi0 ** 2 * omega_c ** 2 / (4.0 * n_th) * ratio))
    logger.info(f"g0 estimate {g0 / TWO_PI:.6e} Hz (S_mech {s_mech:.4e}, S_cal {s_cal:.4e})")
    return G0Estimate(g0=g0, s_mech_peak=s_mech, s_cal_peak=s_cal, gamma_m_used=gamma_m, n_th_used=n_th)


def synthesize_psd(
    cavity: OpticalCavity,
    drive: Drive,
    mech: MechanicalMode,
    interf: Interferometer,
    env: Environment,
    delta: float,
    grid: SpectrumGrid,
    noise_floor: float,
    seed: Optional[int] = None,
    *,
    averages: int | None = None,
    min_bins: float | None = None,
) -> SpectrumTrace:
    """
    Detector PSD at one detuning: floor + thermal mechanical Lorentzian + calibration tone.

    Multiplicative analyzer noise (chi-squared with 2 * averages degrees of
    freedom, unit mean) is applied only when a seed is given.
    """
    averages = settings.ANALYZER_AVERAGES if averages is None else averages
    min_bins = settings.MIN_BINS_PER_LINEWIDTH if min_bins is None else min_bins
    freqs = grid.frequencies()
    values = np.full(freqs.size, float(noise_floor))

    n_th = thermal_occupation(env, mech.omega_m)
    thermal = MechanicalMode.thermal(mech.omega_m, mech.gamma_m, mech.g0, n_th)
    coeffs = output_coefficients(cavity, drive, thermal, interf, delta)
    mech_power = float(np.abs(beat_amplitude(coeffs, "mech")) ** 2)
    tone_power = float(np.abs(beat_amplitude(coeffs, "cal")) ** 2)

    if mech_power > 0:
        point = effective_mech_params(cavity, drive, mech, delta)
        if point.unstable:
            raise InvalidParameterError(
                "no thermal steady state in the parametric instability regime",
                detail={"delta": float(delta)},
            )
        fwhm_hz = point.gamma_eff / TWO_PI
        if fwhm_hz / grid.f_step_hz < min_bins:
            raise UnderResolvedError(
                f"grid step {grid.f_step_hz:.4e} Hz gives {fwhm_hz / grid.f_step_hz:.2f} bins per linewidth",
                detail={"fwhm_hz": fwhm_hz, "f_step_hz": grid.f_step_hz},
            )
        half = 0.5 * fwhm_hz
        center = point.omega_eff / TWO_PI
        values += mech_power * half / (np.pi * ((freqs - center) ** 2 + half ** 2))

    if tone_power > 0:
        f_c = drive.omega_c / TWO_PI
        if not freqs[0] - 0.5 * grid.f_step_hz <= f_c <= freqs[-1] + 0.5 * grid.f_step_hz:
            raise FrequencyOutOfRangeError(f"calibration tone {f_c:.6e} Hz outside the grid")
        values[int(np.argmin(np.abs(freqs - f_c)))] += tone_power / grid.enbw_hz

    if seed is not None:
        rng = np.random.default_rng(seed)
        dof = 2 * averages
        values = values * rng.chisquare(dof, size=values.size) / dof

    return SpectrumTrace(f_start=grid.f_start_hz, f_step=grid.f_step_hz, values=values, enbw=grid.enbw_hz)


def read_trace_csv(path: str | Path, enbw_hz: float | None = None) -> SpectrumTrace:
    """Trace from a ``frequency_hz,psd`` table; ENBW defaults to the bin spacing"""
    columns = read_numeric_csv(path, TRACE_COLUMNS)
    freqs, psd = columns["frequency_hz"], columns["psd"]
    if freqs.size < 2:
        raise DataError(f"{path}: trace needs at least two rows")
    steps = np.diff(freqs)
    f_step = float(np.median(steps))
    if not f_step > 0:
        raise DataError(f"{path}: frequency column must increase")
    uneven = np.flatnonzero(np.abs(steps - f_step) > 1e-6 * f_step)
    if uneven.size:
        row = int(uneven[0]) + 3
        raise DataError(f"{path}: row {row}: frequency spacing is not uniform", detail={"row": row})
    return SpectrumTrace(f_start=float(freqs[0]), f_step=f_step, values=psd, enbw=enbw_hz or f_step)


def trace_frame(trace: SpectrumTrace) -> pd.DataFrame:
    return pd.DataFrame({"frequency_hz": trace.frequencies, "psd": trace.values})


def write_trace_csv(trace: SpectrumTrace, path: str | Path | None = None) -> str:
    return write_csv(trace_frame(trace), path)
