"""
Figures-of-merit routes
"""
from fastapi import APIRouter

from app.schemas.metrics import CooperativityRequest, CooperativityResponse, ModesResponse
from app.services.figures_of_merit import (
    mode_report, quantum_cooperativity, reference_modes, sideband_resolution,
    single_photon_cooperativity
)

router = APIRouter()


@router.get("/modes", response_model=ModesResponse)
async def get_reference_modes():
    """Measured modes with their cooperativity and sideband resolution"""
    return ModesResponse(modes=[mode_report(mode) for mode in reference_modes()])


@router.post("/cooperativity", response_model=CooperativityResponse)
async def cooperativity(request: CooperativityRequest):
    c0 = single_photon_cooperativity(request.g0_hz, request.linewidth_hz, request.kappa_hz)
    response = CooperativityResponse(single_photon_cooperativity=c0)
    if request.frequency_hz is not None:
        response.sideband_resolution = sideband_resolution(request.frequency_hz, request.kappa_hz)
    if request.n_cav is not None and request.n_th is not None:
        response.quantum_cooperativity = quantum_cooperativity(request.n_cav, c0, request.n_th)
    return response
