"""
Command-line interface: simulation sweeps, fits and the g0 calibration pipeline
"""
import argparse
import json
import logging
import math
import sys
import warnings
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from app.core.constants import TWO_PI, angular_to_hz, hz_to_angular
from app.core.exceptions import ConfigError, DataError, OptomechError
from app.core.logging import configure_logging
from app.schemas.config import ExperimentConfig
from app.services.calibration import estimate_g0, read_trace_csv
from app.services.cavity import thermal_occupation
from app.services.figures_of_merit import (
    loaded_quality_factor, mode_report, reference_modes, sideband_resolution,
    single_photon_cooperativity
)
from app.services.fitting import (
    backaction_result_in_hz, fit_backaction, fit_fano, fit_lorentzian
)
from app.services.sweeps import (
    backaction_table, estimate_g0_at, estimate_g0_sweep, eta_sweep_table, reflection_table
)
from app.services.tables import read_numeric_csv, write_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FIT_NOT_CONVERGED = 3


def parse_phase_list(text: str) -> List[float]:
    """Comma-separated phases in radians; a trailing ``pi`` multiplies by pi (``0.77pi``, ``-pi``)"""
    phases = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        try:
            if token.endswith("pi"):
                coefficient = token[:-2].strip().rstrip("*")
                factor = {"": 1.0, "+": 1.0, "-": -1.0}.get(coefficient)
                phases.append(math.pi * (float(coefficient) if factor is None else factor))
            else:
                phases.append(float(token))
        except ValueError:
            raise ConfigError(f"--phase: cannot parse {token!r}") from None
    if not phases:
        raise ConfigError("--phase: phase list is empty")
    return phases


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: Optional[str]) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _emit_table(frame: pd.DataFrame, out: Optional[str]) -> None:
    _emit(write_csv(frame), out)


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    return ExperimentConfig.from_file(args.config)


def _phases(args, config: ExperimentConfig) -> List[float]:
    if args.phase is not None:
        return parse_phase_list(args.phase)
    drive = config.drive_model()
    return [config.interferometer_model().phase(drive.omega_L)]


def cmd_sweep_eta(args) -> int:
    config = _load_config(args)
    table, skipped = eta_sweep_table(config, _phases(args, config), args.mode)
    _emit_table(table, args.out)
    if args.out:
        write_csv(skipped, f"{args.out}.skipped.csv")
    elif not skipped.empty:
        logger.warning(f"{len(skipped)} sweep points skipped")
    return EXIT_OK


def cmd_reflection(args) -> int:
    config = _load_config(args)
    _emit_table(reflection_table(config, _phases(args, config)), args.out)
    return EXIT_OK


def cmd_backaction(args) -> int:
    config = _load_config(args)
    _emit_table(backaction_table(config, args.mode), args.out)
    return EXIT_OK


def _fit_exit(result) -> int:
    return EXIT_OK if result.converged else EXIT_FIT_NOT_CONVERGED


def cmd_fit_reflection(args) -> int:
    columns = read_numeric_csv(args.input, ["delta_hz", "reflection"], optional=["sigma"])
    fitter = fit_fano if args.fit_model == "fano" else fit_lorentzian
    result = fitter(
        columns["delta_hz"], columns["reflection"], sigma=columns.get("sigma"), window_kappa=args.window_kappa
    )
    report = result.report()
    report["model"] = args.fit_model
    report["units"] = "Hz"
    _emit_json(report, args.out)
    return _fit_exit(result)


def cmd_fit_backaction(args) -> int:
    config = _load_config(args)
    columns = read_numeric_csv(args.input, ["delta_hz", "omega_eff_hz"], optional=["gamma_eff_hz"])
    use_gamma = not args.no_gamma
    if use_gamma and "gamma_eff_hz" not in columns:
        raise DataError(f"{args.input}: missing column gamma_eff_hz (use --no-gamma for a frequency-only fit)")
    delta = hz_to_angular(columns["delta_hz"])
    omega_points = np.column_stack([delta, hz_to_angular(columns["omega_eff_hz"])])
    gamma_points = np.column_stack([delta, hz_to_angular(columns["gamma_eff_hz"])]) if use_gamma else None

    cavity = config.cavity_model()
    drive = config.drive_model()
    result = fit_backaction(
        omega_points, gamma_points,
        kappa=cavity.kappa, kappa_ex=cavity.kappa_ex, omega_L=drive.omega_L,
        power=drive.power if args.scale_mode == "fixed" else None,
        fit_scale_mode=args.scale_mode, use_gamma=use_gamma,
    )
    report = backaction_result_in_hz(result).report()
    report["model"] = "backaction"
    report["units"] = "Hz"
    _emit_json(report, args.out)
    return _fit_exit(result)


def cmd_estimate_g0(args) -> int:
    config = _load_config(args)
    phase = parse_phase_list(args.phase)[0] if args.phase is not None else None

    if args.sweep:
        table, failures = estimate_g0_sweep(config, args.seed, args.mode, phase)
        _emit_table(table, args.out)
        if args.out:
            write_csv(failures, f"{args.out}.skipped.csv")
        for row in failures.itertuples():
            logger.warning(f"delta {row.delta_hz:.6e} Hz: {row.reason}")
        return EXIT_OK

    if args.synthesize or not args.trace:
        if args.delta_hz is None:
            delta = -config.mech_model(args.mode).omega_m
        else:
            delta = hz_to_angular(args.delta_hz)
        report = estimate_g0_at(config, delta, args.seed, args.mode, phase)
    else:
        mech = config.mech_model(args.mode)
        drive = config.drive_model(args.mode)
        n_th = thermal_occupation(config.environment_model(), mech.omega_m)
        trace = read_trace_csv(args.trace, args.enbw_hz)
        estimate = estimate_g0(trace, mech.omega_m, drive.omega_c, mech.gamma_m, drive.phi0, n_th)
        report = {
            "g0_hz": estimate.g0_hz,
            "s_mech_peak": estimate.s_mech_peak,
            "s_cal_peak": estimate.s_cal_peak,
            "gamma_m_hz": angular_to_hz(estimate.gamma_m_used),
            "n_th": estimate.n_th_used,
        }
    _emit_json(report, args.out)
    return EXIT_OK


def cmd_cooperativity(args) -> int:
    if not args.config:
        _emit_json({"modes": [mode_report(m) for m in reference_modes()]}, args.out)
        return EXIT_OK
    config = _load_config(args)
    cavity = config.cavity_model()
    modes = []
    for index, mode in enumerate(config.mech):
        mech = config.mech_model(index)
        modes.append({
            "name": mode.name or f"mode {index + 1}",
            "frequency_hz": mode.frequency_hz,
            "single_photon_cooperativity": single_photon_cooperativity(mech.g0, mech.gamma_m, cavity.kappa),
            "sideband_resolution": sideband_resolution(mech.omega_m, cavity.kappa),
        })
    _emit_json({
        "loaded_quality_factor": loaded_quality_factor(cavity.omega_o, cavity.kappa),
        "kappa_hz": cavity.kappa / TWO_PI,
        "modes": modes,
    }, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment configuration (JSON)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--mode", type=int, default=0, help="mechanical mode index in the config")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(
        prog="optomech", description="Cavity optomechanics forward models, fits and g0 calibration"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-eta", parents=[common], help="mechanics/calibration ratio over detuning")
    p.add_argument("--phase", help="interferometer phases, e.g. 0,0.77pi,-0.77pi")
    p.set_defaults(handler=cmd_sweep_eta)

    p = sub.add_parser("reflection", aliases=["simulate-reflection"], parents=[common],
                       help="exact and Fano reflection over detuning")
    p.add_argument("--phase")
    p.set_defaults(handler=cmd_reflection)

    p = sub.add_parser("backaction", parents=[common], help="optical spring and damping over detuning")
    p.set_defaults(handler=cmd_backaction)

    fit = sub.add_parser("fit", help="least-squares fits of CSV data")
    fit_sub = fit.add_subparsers(dest="fit_model", required=True)
    for name in ("fano", "lorentz"):
        p = fit_sub.add_parser(name, parents=[common], help=f"{name} reflection fit (columns delta_hz,reflection[,sigma])")
        p.add_argument("input")
        p.add_argument("--window-kappa", type=float, default=None)
        p.set_defaults(handler=cmd_fit_reflection)
    p = fit_sub.add_parser("backaction", parents=[common],
                           help="joint fit of delta_hz,omega_eff_hz[,gamma_eff_hz]")
    p.add_argument("input")
    p.add_argument("--scale-mode", choices=["fixed", "coupled"], default="fixed")
    p.add_argument("--no-gamma", action="store_true", help="fit the frequency shift only")
    p.set_defaults(handler=cmd_fit_backaction)

    p = sub.add_parser("estimate-g0", parents=[common], help="calibration-tone g0 estimate")
    p.add_argument("--trace", help="analyzer trace CSV (frequency_hz,psd)")
    p.add_argument("--enbw-hz", type=float, default=None, help="analyzer ENBW (default: bin spacing)")
    p.add_argument("--synthesize", action="store_true", help="synthesize the trace from the config")
    p.add_argument("--sweep", action="store_true", help="estimate at every detuning of the sweep")
    p.add_argument("--delta-hz", type=float, default=None, help="detuning (default: red mechanical sideband)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--phase")
    p.set_defaults(handler=cmd_estimate_g0)

    p = sub.add_parser("cooperativity", parents=[common], help="figures of merit")
    p.set_defaults(handler=cmd_cooperativity)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    warnings.simplefilter("default")
    try:
        return args.handler(args)
    except OptomechError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
