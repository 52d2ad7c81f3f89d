"""
Calibration request/response schemas
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from app.schemas.config import ExperimentConfig


class SynthesizeRequest(BaseModel):
    config: ExperimentConfig
    delta_hz: float
    seed: Optional[int] = None
    phase_rad: Optional[float] = None
    mode_index: int = Field(default=0, ge=0)


class TraceSchema(BaseModel):
    """Analyzer trace on a uniform grid"""
    f_start_hz: float
    f_step_hz: float = Field(gt=0)
    enbw_hz: float = Field(gt=0)
    psd: List[float] = Field(min_length=2)


class EstimateRequest(BaseModel):
    trace: TraceSchema
    mechanical_frequency_hz: float = Field(gt=0)
    calibration_frequency_hz: float = Field(gt=0)
    linewidth_hz: float = Field(gt=0)
    modulation_depth_rad: float = Field(gt=0)
    n_th: float = Field(gt=0)


class G0EstimateResponse(BaseModel):
    g0_hz: float
    s_mech_peak: float
    s_cal_peak: float
    gamma_m_hz: float
    n_th: float
