"""
Detuning sweeps assembled into plot-ready tables
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app.core.constants import TWO_PI, angular_to_hz
from app.core.exceptions import (
    ConfigError, EmptyGridError, InvalidParameterError, OptomechError
)
from app.schemas.config import ExperimentConfig
from app.services.backaction import backaction_sweep
from app.services.calibration import estimate_g0, synthesize_psd
from app.services.cavity import thermal_occupation
from app.services.interferometer import (
    fano_identification, fano_model, g0_bias_sweep, reflection_exact
)

logger = logging.getLogger(__name__)


def phase_label(psi: float) -> str:
    return f"psi={psi / np.pi:.6g}pi"


def _require_phases(phases: Sequence[float]) -> List[float]:
    phases = [float(p) for p in phases]
    if not phases:
        raise InvalidParameterError("phase list is empty")
    return phases


def eta_sweep_table(
    config: ExperimentConfig, phases: Sequence[float], mode_index: int = 0
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """delta_hz plus eta_g and g0_measured_hz per phase; skipped points as NaN and in a second table"""
    phases = _require_phases(phases)
    cavity = config.cavity_model()
    drive = config.drive_model(mode_index)
    mech = config.thermal_mech_model(mode_index)
    grid = config.detuning_grid()

    table = {"delta_hz": config.sweep.grid_hz()}
    skipped = []
    for psi in phases:
        label = phase_label(psi)
        sweep = g0_bias_sweep(cavity, drive, mech, config.interferometer_model(psi), grid)
        table[f"eta_g[{label}]"] = sweep.eta_g
        table[f"g0_measured_hz[{label}]"] = angular_to_hz(sweep.g0_measured)
        skipped.extend({"phase": label, "delta_hz": angular_to_hz(d), "reason": reason} for d, reason in sweep.skipped)
    skip_frame = pd.DataFrame(skipped, columns=["phase", "delta_hz", "reason"])
    return pd.DataFrame(table), skip_frame


def reflection_table(config: ExperimentConfig, phases: Sequence[float]) -> pd.DataFrame:
    """Exact reflection, its constant-plus-Fano form, and their difference, per phase"""
    phases = _require_phases(phases)
    cavity = config.cavity_model()
    drive = config.drive_model()
    grid = config.detuning_grid()

    table = {"delta_hz": config.sweep.grid_hz()}
    for psi in phases:
        label = phase_label(psi)
        interf = config.interferometer_model(psi)
        exact = reflection_exact(cavity, drive, interf, grid)
        fano = fano_identification(cavity, drive, interf)
        approx = fano_model(grid, fano.h, fano.a_amp, fano.q, cavity.kappa)
        table[f"reflection_exact[{label}]"] = exact
        table[f"reflection_fano[{label}]"] = approx
        table[f"residual[{label}]"] = exact - approx
    return pd.DataFrame(table)


def backaction_table(config: ExperimentConfig, mode_index: int = 0) -> pd.DataFrame:
    cavity = config.cavity_model()
    drive = config.drive_model(mode_index)
    mech = config.mech_model(mode_index)
    points = backaction_sweep(cavity, drive, mech, config.detuning_grid())
    return pd.DataFrame({
        "delta_hz": [angular_to_hz(p.delta) for p in points],
        "omega_eff_hz": [angular_to_hz(p.omega_eff) for p in points],
        "gamma_eff_hz": [angular_to_hz(p.gamma_eff) for p in points],
        "unstable": [p.unstable for p in points],
    })


def estimate_g0_at(
    config: ExperimentConfig, delta: float, seed: Optional[int] = None, mode_index: int = 0,
    phase: Optional[float] = None,
) -> dict:
    """Synthesize the analyzer trace at one detuning and run the estimator on it"""
    cavity = config.cavity_model()
    drive = config.drive_model(mode_index)
    mech = config.mech_model(mode_index)
    env = config.environment_model()
    n_th = thermal_occupation(env, mech.omega_m)
    trace = synthesize_psd(
        cavity, drive, mech, config.interferometer_model(phase), env, delta,
        config.spectrum_grid(mode_index), config.analyzer.noise_floor, seed,
        averages=config.analyzer.averages,
    )
    estimate = estimate_g0(trace, mech.omega_m, drive.omega_c, mech.gamma_m, drive.phi0, n_th)
    return {
        "delta_hz": angular_to_hz(delta),
        "g0_hz": estimate.g0_hz,
        "s_mech_peak": estimate.s_mech_peak,
        "s_cal_peak": estimate.s_cal_peak,
        "gamma_m_hz": angular_to_hz(estimate.gamma_m_used),
        "n_th": estimate.n_th_used,
    }


def estimate_g0_sweep(
    config: ExperimentConfig, seed: Optional[int] = None, mode_index: int = 0, phase: Optional[float] = None
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Per-detuning estimates in grid order. Point i uses seed + i when a seed is given.

    Points where detection fails are recorded with the error message.
    """
    if config.analyzer is None:
        raise ConfigError("analyzer: section required for spectrum synthesis")
    grid = config.detuning_grid()
    if grid.size == 0:
        raise EmptyGridError("detuning grid is empty")
    rows, failures = [], []
    for i, delta in enumerate(grid):
        point_seed = None if seed is None else seed + i
        try:
            rows.append(estimate_g0_at(config, delta, point_seed, mode_index, phase))
        except OptomechError as exc:
            failures.append({"delta_hz": delta / TWO_PI, "reason": exc.message})
            rows.append({"delta_hz": delta / TWO_PI, "g0_hz": np.nan})
    logger.info(f"g0 estimate sweep: {grid.size} points, {len(failures)} failed")
    return pd.DataFrame(rows), pd.DataFrame(failures, columns=["delta_hz", "reason"])
