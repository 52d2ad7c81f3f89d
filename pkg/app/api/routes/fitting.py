"""
Fitting routes
"""
import numpy as np
from fastapi import APIRouter

from app.core.constants import hz_to_angular
from app.schemas.fitting import BackactionFitRequest, FitReport, ReflectionFitRequest
from app.services.fitting import (
    backaction_result_in_hz, fit_backaction, fit_fano, fit_lorentzian
)

router = APIRouter()


@router.post("/fano", response_model=FitReport)
async def fano(request: ReflectionFitRequest):
    """Fano reflection fit; parameters h, a_amp, q, kappa, delta0 in the units of the data"""
    result = fit_fano(
        request.delta_hz, request.reflection, request.p0, sigma=request.sigma, window_kappa=request.window_kappa
    )
    return FitReport(**result.report())


@router.post("/lorentz", response_model=FitReport)
async def lorentz(request: ReflectionFitRequest):
    result = fit_lorentzian(
        request.delta_hz, request.reflection, request.p0, sigma=request.sigma, window_kappa=request.window_kappa
    )
    return FitReport(**result.report())


@router.post("/backaction", response_model=FitReport)
async def backaction(request: BackactionFitRequest):
    """Joint optical spring and damping fit; results in Hz"""
    delta = hz_to_angular(np.asarray(request.delta_hz))
    omega_points = np.column_stack([delta, hz_to_angular(np.asarray(request.omega_eff_hz))])
    gamma_points = None
    if request.gamma_eff_hz is not None:
        gamma_points = np.column_stack([delta, hz_to_angular(np.asarray(request.gamma_eff_hz))])
    result = fit_backaction(
        omega_points,
        gamma_points,
        kappa=hz_to_angular(request.kappa_hz),
        kappa_ex=hz_to_angular(request.kappa_ex_hz),
        omega_L=hz_to_angular(request.laser_frequency_hz),
        power=request.power_w,
        fit_scale_mode=request.fit_scale_mode,
        use_gamma=request.use_gamma,
    )
    return FitReport(**backaction_result_in_hz(result).report())
