"""
Simulation request/response schemas
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from app.schemas.config import ExperimentConfig


class PhaseSweepRequest(BaseModel):
    """Configuration plus interferometer phases (radians)"""
    config: ExperimentConfig
    phases_rad: Optional[List[float]] = None
    mode_index: int = Field(default=0, ge=0)


class SkippedPoint(BaseModel):
    phase: str
    delta_hz: float
    reason: str


class TableResponse(BaseModel):
    """Column-oriented table; missing values are null"""
    columns: List[str]
    data: dict
    skipped: List[SkippedPoint] = []


class PointRequest(BaseModel):
    config: ExperimentConfig
    delta_hz: float
    phase_rad: Optional[float] = None
    mode_index: int = Field(default=0, ge=0)


class ComplexValue(BaseModel):
    real: float
    imag: float


class OutputCoefficientsResponse(BaseModel):
    a_carrier: ComplexValue
    b_cal: ComplexValue
    c_cal: ComplexValue
    b_mech: ComplexValue
    c_mech: ComplexValue
    eta_g: Optional[float] = None


class SteadyStateResponse(BaseModel):
    a0: ComplexValue
    a_minus_c: ComplexValue
    a_plus_c: ComplexValue
    a_minus_m: ComplexValue
    a_plus_m: ComplexValue
    photon_number: float
