"""
Figures-of-merit schemas
"""
from typing import List, Optional

from pydantic import BaseModel, Field


class CooperativityRequest(BaseModel):
    g0_hz: float = Field(ge=0)
    linewidth_hz: float = Field(gt=0)
    kappa_hz: float = Field(gt=0)
    frequency_hz: Optional[float] = Field(default=None, gt=0)
    n_cav: Optional[float] = Field(default=None, ge=0)
    n_th: Optional[float] = Field(default=None, gt=0)


class CooperativityResponse(BaseModel):
    single_photon_cooperativity: float
    sideband_resolution: Optional[float] = None
    quantum_cooperativity: Optional[float] = None


class ModeReport(BaseModel):
    name: str
    frequency_hz: float
    linewidth_hz: float
    g0_hz: Optional[float] = None
    mechanical_quality_factor: float
    sideband_resolution: float
    loaded_quality_factor: float
    single_photon_cooperativity: Optional[float] = None


class ModesResponse(BaseModel):
    modes: List[ModeReport]
