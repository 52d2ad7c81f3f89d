"""
Simulation routes
"""
import math

import numpy as np
import pandas as pd
from fastapi import APIRouter

from app.core.constants import hz_to_angular
from app.core.exceptions import CalibrationToneTooSmallError
from app.schemas.simulation import (
    ComplexValue, OutputCoefficientsResponse, PhaseSweepRequest, PointRequest,
    SteadyStateResponse, TableResponse
)
from app.services.cavity import intracavity_photon_number
from app.services.interferometer import eta_g, output_coefficients
from app.services.sideband import steady_state
from app.services.sweeps import backaction_table, eta_sweep_table, reflection_table

router = APIRouter()


def _phases(request: PhaseSweepRequest):
    if request.phases_rad is not None:
        return request.phases_rad
    config = request.config
    return [config.interferometer_model().phase(config.drive_model().omega_L)]


def table_response(frame: pd.DataFrame, skipped: pd.DataFrame | None = None) -> TableResponse:
    """Column-oriented JSON with NaN as null"""
    data = {
        name: [None if isinstance(v, float) and math.isnan(v) else v for v in frame[name].tolist()]
        for name in frame.columns
    }
    records = [] if skipped is None else skipped.to_dict(orient="records")
    return TableResponse(columns=list(frame.columns), data=data, skipped=records)


def _complex(value) -> ComplexValue:
    value = complex(np.asarray(value).reshape(-1)[0])
    return ComplexValue(real=value.real, imag=value.imag)


@router.post("/eta-sweep", response_model=TableResponse)
async def sweep_eta(request: PhaseSweepRequest):
    """
    Mechanics/calibration ratio and apparent g0 over the configured detuning sweep

    One eta_g and one g0_measured_hz column per phase; undetectable points are null.
    """
    table, skipped = eta_sweep_table(request.config, _phases(request), request.mode_index)
    return table_response(table, skipped)


@router.post("/reflection", response_model=TableResponse)
async def sweep_reflection(request: PhaseSweepRequest):
    """Exact reflection next to its Fano approximation"""
    return table_response(reflection_table(request.config, _phases(request)))


@router.post("/backaction", response_model=TableResponse)
async def sweep_backaction(request: PhaseSweepRequest):
    return table_response(backaction_table(request.config, request.mode_index))


@router.post("/output-coefficients", response_model=OutputCoefficientsResponse)
async def get_output_coefficients(request: PointRequest):
    config = request.config
    cavity = config.cavity_model()
    drive = config.drive_model(request.mode_index)
    mech = config.thermal_mech_model(request.mode_index)
    interf = config.interferometer_model(request.phase_rad)
    delta = hz_to_angular(request.delta_hz)

    coeffs = output_coefficients(cavity, drive, mech, interf, delta)
    try:
        ratio = eta_g(cavity, drive, mech, interf, delta)
    except CalibrationToneTooSmallError:
        ratio = None
    return OutputCoefficientsResponse(
        a_carrier=_complex(coeffs.a_carrier),
        b_cal=_complex(coeffs.b_cal),
        c_cal=_complex(coeffs.c_cal),
        b_mech=_complex(coeffs.b_mech),
        c_mech=_complex(coeffs.c_mech),
        eta_g=ratio,
    )


@router.post("/steady-state", response_model=SteadyStateResponse)
async def get_steady_state(request: PointRequest):
    config = request.config
    cavity = config.cavity_model()
    drive = config.drive_model(request.mode_index)
    delta = hz_to_angular(request.delta_hz)

    amps = steady_state(cavity, drive, config.thermal_mech_model(request.mode_index), delta)
    return SteadyStateResponse(
        a0=_complex(amps.a0),
        a_minus_c=_complex(amps.a_minus_c),
        a_plus_c=_complex(amps.a_plus_c),
        a_minus_m=_complex(amps.a_minus_m),
        a_plus_m=_complex(amps.a_plus_m),
        photon_number=float(intracavity_photon_number(cavity, drive, delta)),
    )
