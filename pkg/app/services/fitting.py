"""
Levenberg-Marquardt least squares and the reflection and backaction fits
"""
import logging
import warnings
from typing import Callable, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.exceptions import (
    DataError, DegenerateFanoWarning, InvalidParameterError, ModelEvaluationError,
    NoDescentDirectionError, UnderdeterminedFitError
)
from app.models import Drive, FitResult, MechanicalMode, OpticalCavity
from app.services.backaction import delta_gamma_m, delta_omega_m
from app.services.interferometer import fano_model

logger = logging.getLogger(__name__)

FANO_PARAMS = ["h", "a_amp", "q", "kappa", "delta0"]
LORENTZ_PARAMS = ["h", "a_amp", "kappa", "delta0"]

Model = Callable[[np.ndarray, np.ndarray], np.ndarray]


def finite_difference_jacobian(
    model: Model, p: np.ndarray, x: np.ndarray, *, step: float | None = None,
    scales: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Central differences with per-parameter step step * max(|p_i|, scale_i)"""
    step = settings.LM_FD_STEP if step is None else step
    p = np.asarray(p, dtype=float)
    scales = np.ones_like(p) if scales is None else np.asarray(scales, dtype=float)
    columns = []
    for i in range(p.size):
        h = step * max(abs(p[i]), scales[i])
        if h == 0.0:
            h = step
        forward, backward = p.copy(), p.copy()
        forward[i] += h
        backward[i] -= h
        columns.append((np.asarray(model(forward, x)) - np.asarray(model(backward, x))) / (2.0 * h))
    return np.column_stack(columns)


def _evaluate(model: Model, p: np.ndarray, x: np.ndarray, size: int) -> np.ndarray:
    try:
        values = np.asarray(model(p, x), dtype=float)
    except (ValueError, ZeroDivisionError, FloatingPointError) as exc:
        raise ModelEvaluationError(f"model evaluation failed: {exc}") from exc
    if values.shape != (size,):
        raise ModelEvaluationError(f"model returned shape {values.shape}, expected ({size},)")
    return values


def nlls_solve(
    model: Model,
    x: Sequence[float],
    y: Sequence[float],
    p0: Sequence[float],
    *,
    param_names: Optional[Sequence[str]] = None,
    sigma: Optional[Sequence[float]] = None,
    scales: Optional[Sequence[float]] = None,
    jacobian: Optional[Model] = None,
    max_iter: int | None = None,
    xtol: float | None = None,
    ftol: float | None = None,
    fd_step: float | None = None,
    lambda0: float | None = None,
) -> FitResult:
    """
    Minimize sum(((y - model(p, x)) / sigma)^2) by Levenberg-Marquardt.

    Each step solves the damped system [J D^-1; sqrt(lambda) I] u = [r; 0] in
    the least-squares sense and takes dp = D^-1 u, D holding the Jacobian
    column norms. Accepted steps strictly decrease the cost.
    """
    max_iter = settings.LM_MAX_ITER if max_iter is None else max_iter
    xtol = settings.LM_XTOL if xtol is None else xtol
    ftol = settings.LM_FTOL if ftol is None else ftol
    lam = settings.LM_LAMBDA0 if lambda0 is None else lambda0

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    p = np.asarray(p0, dtype=float).copy()
    m, n = y.size, p.size
    names = list(param_names) if param_names is not None else [f"p{i}" for i in range(n)]
    if not np.all(np.isfinite(p)):
        raise InvalidParameterError("initial parameters must be finite")
    if m < n:
        raise UnderdeterminedFitError(f"{m} data points for {n} free parameters")
    weights = np.ones(m) if sigma is None else 1.0 / np.asarray(sigma, dtype=float)
    scale_arr = None if scales is None else np.asarray(scales, dtype=float)

    def residual(params: np.ndarray) -> np.ndarray:
        return weights * (y - _evaluate(model, params, x, m))

    def weighted_jacobian(params: np.ndarray) -> np.ndarray:
        if jacobian is not None:
            jac = np.asarray(jacobian(params, x), dtype=float)
        else:
            jac = finite_difference_jacobian(model, params, x, step=fd_step, scales=scale_arr)
        return weights[:, None] * jac

    r = residual(p)
    if not np.all(np.isfinite(r)):
        raise ModelEvaluationError("model evaluation failed: non-finite output at the initial parameters")
    cost = float(r @ r)
    history = [cost]
    flags: list[str] = []
    converged = cost == 0.0
    iterations = 0
    jw = weighted_jacobian(p)

    while not converged and iterations < max_iter:
        iterations += 1
        norms = np.linalg.norm(jw, axis=0)
        d = np.where(norms > 0, norms, 1.0)
        scaled = jw / d
        rhs = np.concatenate([r, np.zeros(n)])
        accepted = False
        step_small = False

        while lam <= settings.LM_LAMBDA_MAX:
            system = np.vstack([scaled, np.sqrt(lam) * np.eye(n)])
            u, *_ = np.linalg.lstsq(system, rhs, rcond=None)
            step = u / d
            step_small = np.linalg.norm(u) <= xtol * (np.linalg.norm(d * p) + xtol)

            trial = p + step
            try:
                r_trial = residual(trial)
                trial_cost = float(r_trial @ r_trial)
            except ModelEvaluationError:
                trial_cost = np.inf
            if np.isfinite(trial_cost) and trial_cost < cost:
                accepted = True
                break
            if step_small:
                break
            logger.debug(f"rejected step at iteration {iterations}: cost {trial_cost:.6e} >= {cost:.6e}, lambda {lam:.1e}")
            lam *= settings.LM_LAMBDA_UP

        if not accepted:
            if step_small:
                converged = True
                break
            raise NoDescentDirectionError(
                "no descent direction at maximum damping",
                detail={"iterations": iterations, "cost": cost},
            )

        decrease = (cost - trial_cost) / cost
        p, r, cost = trial, r_trial, trial_cost
        history.append(cost)
        lam = max(lam / settings.LM_LAMBDA_DOWN, 1e-12)
        if cost == 0.0 or step_small or decrease <= ftol:
            converged = True
            break
        jw = weighted_jacobian(p)

    if not converged:
        flags.append("max_iter")
    jw = weighted_jacobian(p)
    dof = max(m - n, 1)
    norms = np.linalg.norm(jw, axis=0)
    d = np.where(norms > 0, norms, 1.0)
    scaled = jw / d
    covariance = (cost / dof) * np.linalg.pinv(scaled.T @ scaled) / np.outer(d, d)
    covariance = 0.5 * (covariance + covariance.T)

    logger.info(f"fit {'converged' if converged else 'stopped'} after {iterations} iterations, residual norm {np.sqrt(cost):.4e}")
    return FitResult(
        param_names=names,
        values=p,
        covariance=covariance,
        residual_norm=float(np.sqrt(cost)),
        iterations=iterations,
        converged=converged,
        cost_history=history,
        flags=flags,
    )


def fano_jacobian(params: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """Analytic derivatives of the Fano lineshape in the order h, a_amp, q, kappa, delta0"""
    _, a_amp, q, kappa, delta0 = params
    u = np.asarray(delta, dtype=float) - delta0
    numer = (1.0 - q ** 2) * 0.5 * kappa - q * u
    denom = 0.25 * kappa ** 2 + u ** 2
    d_h = np.ones_like(u)
    d_a = -numer / denom
    d_q = a_amp * (q * kappa + u) / denom
    d_kappa = -a_amp * (0.5 * (1.0 - q ** 2) * denom - 0.5 * kappa * numer) / denom ** 2
    d_delta0 = a_amp * (-q * denom - 2.0 * u * numer) / denom ** 2
    return np.column_stack([d_h, d_a, d_q, d_kappa, d_delta0])


def fano_initial_guess(delta: Sequence[float], reflection: Sequence[float]) -> np.ndarray:
    """
    Starting point (h, a_amp, q, kappa, delta0) for the Fano fit.

    h from the trace edges, delta0 at the extremum of |R - h|, kappa from the
    full width at half of that extremum, q from the sign of the left/right
    asymmetry.
    """
    delta = np.asarray(delta, dtype=float)
    refl = np.asarray(reflection, dtype=float)
    order = np.argsort(delta)
    delta, refl = delta[order], refl[order]
    edge = max(1, delta.size // 10)
    h = float(np.median(np.concatenate([refl[:edge], refl[-edge:]])))
    dip = refl - h
    idx = int(np.argmax(np.abs(dip)))
    extremum = dip[idx]
    delta0 = float(delta[idx])

    above = np.abs(dip) >= 0.5 * abs(extremum)
    lo = idx
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = idx
    while hi < delta.size - 1 and above[hi + 1]:
        hi += 1
    kappa = float(delta[hi] - delta[lo]) or float(np.min(np.diff(delta)))
    a_amp = -0.5 * extremum * kappa

    left = np.abs(dip[(delta < delta0) & (delta >= delta0 - kappa)])
    right = np.abs(dip[(delta > delta0) & (delta <= delta0 + kappa)])
    asymmetry = (left.mean() if left.size else 0.0) - (right.mean() if right.size else 0.0)
    q = 0.0
    if abs(asymmetry) > 1e-6 * abs(extremum):
        q = 0.1 * float(np.sign(asymmetry) * np.sign(a_amp))
    return np.array([h, a_amp, q, kappa, delta0])


def _window(delta: np.ndarray, refl: np.ndarray, sigma, center: float, half_width: float):
    mask = np.abs(delta - center) <= half_width
    sig = None if sigma is None else np.asarray(sigma, dtype=float)[mask]
    return delta[mask], refl[mask], sig


def fit_fano(
    delta: Sequence[float],
    reflection: Sequence[float],
    p0: Optional[Sequence[float]] = None,
    *,
    sigma: Optional[Sequence[float]] = None,
    window_kappa: float | None = None,
) -> FitResult:
    """Fit R(delta) = h - A ((1 - q^2) kappa/2 - q u) / (kappa^2/4 + u^2) near resonance"""
    window_kappa = settings.FANO_WINDOW_KAPPA if window_kappa is None else window_kappa
    delta = np.asarray(delta, dtype=float)
    refl = np.asarray(reflection, dtype=float)
    if delta.shape != refl.shape:
        raise DataError("detuning and reflection columns differ in length")
    start = fano_initial_guess(delta, refl) if p0 is None else np.asarray(p0, dtype=float)

    x, y, sig = _window(delta, refl, sigma, start[4], window_kappa * abs(start[3]))
    if x.size < 5:
        raise UnderdeterminedFitError(f"only {x.size} points within {window_kappa:g} kappa of resonance")

    def model(p, d):
        return fano_model(d, *p)

    scales = np.array([abs(start[0]) or 1.0, abs(start[1]) or 1.0, 1.0, abs(start[3]), abs(start[3])])
    result = nlls_solve(
        model, x, y, start, param_names=FANO_PARAMS, sigma=sig, scales=scales, jacobian=fano_jacobian,
    )
    _flag_reflection_fit(result)
    return result


def fit_lorentzian(
    delta: Sequence[float],
    reflection: Sequence[float],
    p0: Optional[Sequence[float]] = None,
    *,
    sigma: Optional[Sequence[float]] = None,
    window_kappa: float | None = None,
) -> FitResult:
    """Fano fit with q frozen at zero"""
    window_kappa = settings.FANO_WINDOW_KAPPA if window_kappa is None else window_kappa
    delta = np.asarray(delta, dtype=float)
    refl = np.asarray(reflection, dtype=float)
    if delta.shape != refl.shape:
        raise DataError("detuning and reflection columns differ in length")
    if p0 is None:
        h, a_amp, _, kappa, delta0 = fano_initial_guess(delta, refl)
        start = np.array([h, a_amp, kappa, delta0])
    else:
        start = np.asarray(p0, dtype=float)

    x, y, sig = _window(delta, refl, sigma, start[3], window_kappa * abs(start[2]))
    if x.size < 5:
        raise UnderdeterminedFitError(f"only {x.size} points within {window_kappa:g} kappa of resonance")

    def model(p, d):
        return fano_model(d, p[0], p[1], 0.0, p[2], p[3])

    scales = np.array([abs(start[0]) or 1.0, abs(start[1]) or 1.0, abs(start[2]), abs(start[2])])
    result = nlls_solve(model, x, y, start, param_names=LORENTZ_PARAMS, sigma=sig, scales=scales)
    _flag_reflection_fit(result)
    return result


def _flag_reflection_fit(result: FitResult) -> None:
    params = result.params
    q = params.get("q", 0.0)
    if abs(q) > settings.FANO_DEGENERATE_Q:
        message = f"degenerate Fano fit: |q| = {abs(q):.3g} exceeds {settings.FANO_DEGENERATE_Q:g}"
        logger.warning(message)
        warnings.warn(message, DegenerateFanoWarning, stacklevel=3)
        result.flags.append("degenerate_fano")
    depth = 2.0 * abs(params["a_amp"]) / max(abs(params["kappa"]), np.finfo(float).tiny)
    if depth <= 1e-9 * max(abs(params["h"]), np.finfo(float).tiny):
        result.flags.append("flat")


def _backaction_shapes(delta: np.ndarray, omega_m: float, kappa: float, kappa_ex: float, omega_L: float):
    """Frequency and damping shifts per unit g0^2 P"""
    cavity = OpticalCavity(omega_o=omega_L, kappa_0=kappa - kappa_ex, kappa_ex=kappa_ex)
    drive = Drive(omega_L=omega_L, power=1.0)
    mech = MechanicalMode(omega_m=omega_m, gamma_m=1.0, g0=1.0)
    return delta_omega_m(cavity, drive, mech, delta), delta_gamma_m(cavity, drive, mech, delta)


def fit_backaction(
    omega_points: Sequence[tuple],
    gamma_points: Optional[Sequence[tuple]] = None,
    *,
    kappa: float,
    kappa_ex: float,
    omega_L: float,
    power: float | None = None,
    fit_scale_mode: str = "fixed",
    use_gamma: bool = True,
    omega_sigma: Optional[Sequence[float]] = None,
    gamma_sigma: Optional[Sequence[float]] = None,
) -> FitResult:
    """
    Joint fit of (delta, Omega_eff) and (delta, Gamma_eff) sharing the coupling.

    In "fixed" mode the input power is known and g0 is fitted; in "coupled"
    mode only the product g0^2 P is identifiable and is reported as
    ``g0_squared_power``. Omega_eff is fitted relative to its sample mean.
    """
    if fit_scale_mode not in ("fixed", "coupled"):
        raise InvalidParameterError(f"fit_scale_mode must be 'fixed' or 'coupled', got {fit_scale_mode!r}")
    if fit_scale_mode == "fixed" and not (power and power > 0):
        raise InvalidParameterError("fixed scale mode needs a positive input power")
    if not (kappa > 0 and 0 < kappa_ex <= kappa and omega_L > 0):
        raise InvalidParameterError("fixed cavity parameters must satisfy 0 < kappa_ex <= kappa and omega_L > 0")

    omega_arr = np.asarray(omega_points, dtype=float).reshape(-1, 2)
    d_om, om = omega_arr[:, 0], omega_arr[:, 1]
    if use_gamma:
        if gamma_points is None:
            raise DataError("linewidth points are required when use_gamma is set")
        gamma_arr = np.asarray(gamma_points, dtype=float).reshape(-1, 2)
        d_ga, ga = gamma_arr[:, 0], gamma_arr[:, 1]
    else:
        d_ga, ga = np.empty(0), np.empty(0)

    n_params = 3 if use_gamma else 2
    n_detunings = np.unique(np.concatenate([d_om, d_ga])).size
    if n_detunings < 3 or om.size + ga.size < n_params:
        raise UnderdeterminedFitError(
            f"{n_detunings} detuning points and {om.size + ga.size} samples for {n_params} parameters"
        )

    center = float(om.mean())
    scale_factor = power if fit_scale_mode == "fixed" else 1.0
    n_om = om.size

    def unpack(p):
        offset = p[0]
        gamma_m = p[1] if use_gamma else 0.0
        strength = p[-1]
        coupling = strength ** 2 * scale_factor if fit_scale_mode == "fixed" else strength
        return offset, gamma_m, coupling

    def model(p, _x):
        offset, gamma_m, coupling = unpack(p)
        omega_m = center + offset
        if not omega_m > 0:
            raise ValueError("mechanical frequency left the physical domain")
        shift_om, _ = _backaction_shapes(d_om, omega_m, kappa, kappa_ex, omega_L)
        parts = [offset + coupling * shift_om]
        if use_gamma:
            _, shift_ga = _backaction_shapes(d_ga, omega_m, kappa, kappa_ex, omega_L)
            parts.append(gamma_m + coupling * shift_ga)
        return np.concatenate(parts)

    # Linear start with Omega_m at the sample mean
    shape_om, _ = _backaction_shapes(d_om, center, kappa, kappa_ex, omega_L)
    rows = [np.column_stack([np.ones(n_om), np.zeros(n_om), shape_om])]
    if use_gamma:
        _, shape_ga = _backaction_shapes(d_ga, center, kappa, kappa_ex, omega_L)
        rows.append(np.column_stack([np.zeros(ga.size), np.ones(ga.size), shape_ga]))
    design = np.vstack(rows)
    target = np.concatenate([om - center, ga])
    if not use_gamma:
        design = design[:, [0, 2]]
    linear, *_ = np.linalg.lstsq(design, target, rcond=None)
    coupling0 = linear[-1]
    if fit_scale_mode == "fixed":
        strength0 = np.sqrt(abs(coupling0) / scale_factor)
        last_name = "g0"
    else:
        strength0 = coupling0
        last_name = "g0_squared_power"
    p0 = [linear[0], linear[1], strength0] if use_gamma else [linear[0], strength0]
    names = ["omega_m", "gamma_m", last_name] if use_gamma else ["omega_m", last_name]

    sigma = None
    if omega_sigma is not None or gamma_sigma is not None:
        sigma = np.concatenate([
            np.ones(n_om) if omega_sigma is None else np.asarray(omega_sigma, dtype=float),
            np.ones(ga.size) if gamma_sigma is None else np.asarray(gamma_sigma, dtype=float),
        ])
    rate_scale = max(float(np.ptp(om)), float(np.abs(ga).max()) if ga.size else 0.0, 1.0)
    scales = [rate_scale, rate_scale, abs(strength0) or 1.0] if use_gamma else [rate_scale, abs(strength0) or 1.0]

    result = nlls_solve(
        model, np.arange(target.size), target, p0, param_names=names, sigma=sigma, scales=scales,
    )
    values = result.values.copy()
    values[0] += center
    result.values = values
    if fit_scale_mode == "fixed":
        fold_coupling_sign(result)
    return result


def fold_coupling_sign(result: FitResult) -> FitResult:
    """Report g0 (last parameter, fitted through g0^2) as positive, flipping its covariance row and column"""
    if result.values[-1] < 0:
        sign = np.ones(result.values.size)
        sign[-1] = -1.0
        result.values = result.values * sign
        result.covariance = result.covariance * np.outer(sign, sign)
    return result


def rescale_result(result: FitResult, factors: dict) -> FitResult:
    """Copy of a fit with parameters multiplied by per-name factors (unit conversion)"""
    scale = np.array([factors.get(name, 1.0) for name in result.param_names])
    return FitResult(
        param_names=list(result.param_names),
        values=result.values * scale,
        covariance=result.covariance * np.outer(scale, scale),
        residual_norm=result.residual_norm,
        iterations=result.iterations,
        converged=result.converged,
        cost_history=list(result.cost_history),
        flags=list(result.flags),
    )


def backaction_result_in_hz(result: FitResult) -> FitResult:
    """Angular backaction fit parameters expressed in Hz (g0^2 P in Hz^2 W)"""
    to_hz = 1.0 / (2.0 * np.pi)
    return rescale_result(result, {
        "omega_m": to_hz, "gamma_m": to_hz, "g0": to_hz, "g0_squared_power": to_hz ** 2,
    })
