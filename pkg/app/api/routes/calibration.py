"""
Calibration routes
"""
from fastapi import APIRouter

from app.core.constants import hz_to_angular
from app.models import SpectrumTrace
from app.schemas.calibration import (
    EstimateRequest, G0EstimateResponse, SynthesizeRequest, TraceSchema
)
from app.services.calibration import estimate_g0, synthesize_psd

router = APIRouter()


@router.post("/synthesize", response_model=TraceSchema)
async def synthesize(request: SynthesizeRequest):
    """
    Analyzer trace around the mechanical frequency at one detuning

    Deterministic for a given seed; no analyzer noise without one.
    """
    config = request.config
    trace = synthesize_psd(
        config.cavity_model(),
        config.drive_model(request.mode_index),
        config.mech_model(request.mode_index),
        config.interferometer_model(request.phase_rad),
        config.environment_model(),
        hz_to_angular(request.delta_hz),
        config.spectrum_grid(request.mode_index),
        config.analyzer.noise_floor,
        request.seed,
        averages=config.analyzer.averages,
    )
    return TraceSchema(f_start_hz=trace.f_start, f_step_hz=trace.f_step, enbw_hz=trace.enbw, psd=trace.values.tolist())


@router.post("/estimate", response_model=G0EstimateResponse)
async def estimate(request: EstimateRequest):
    trace = SpectrumTrace(
        f_start=request.trace.f_start_hz,
        f_step=request.trace.f_step_hz,
        values=request.trace.psd,
        enbw=request.trace.enbw_hz,
    )
    result = estimate_g0(
        trace,
        hz_to_angular(request.mechanical_frequency_hz),
        hz_to_angular(request.calibration_frequency_hz),
        hz_to_angular(request.linewidth_hz),
        request.modulation_depth_rad,
        request.n_th,
    )
    return G0EstimateResponse(
        g0_hz=result.g0_hz,
        s_mech_peak=result.s_mech_peak,
        s_cal_peak=result.s_cal_peak,
        gamma_m_hz=request.linewidth_hz,
        n_th=result.n_th_used,
    )
