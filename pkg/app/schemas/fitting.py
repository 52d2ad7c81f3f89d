"""
Fitting request/response schemas
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class ReflectionFitRequest(BaseModel):
    """Reflection data; p0 in the order of the fitted parameters"""
    delta_hz: List[float] = Field(min_length=5)
    reflection: List[float] = Field(min_length=5)
    sigma: Optional[List[float]] = None
    p0: Optional[List[float]] = None
    window_kappa: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.delta_hz) != len(self.reflection):
            raise ValueError("delta_hz and reflection differ in length")
        if self.sigma is not None and len(self.sigma) != len(self.delta_hz):
            raise ValueError("sigma length differs from the data")
        return self


class BackactionFitRequest(BaseModel):
    delta_hz: List[float]
    omega_eff_hz: List[float]
    gamma_eff_hz: Optional[List[float]] = None
    kappa_hz: float = Field(gt=0)
    kappa_ex_hz: float = Field(gt=0)
    laser_frequency_hz: float = Field(gt=0)
    power_w: Optional[float] = Field(default=None, gt=0)
    fit_scale_mode: Literal["fixed", "coupled"] = "fixed"
    use_gamma: bool = True

    @model_validator(mode="after")
    def check_lengths(self):
        if len(self.delta_hz) != len(self.omega_eff_hz):
            raise ValueError("delta_hz and omega_eff_hz differ in length")
        if self.gamma_eff_hz is not None and len(self.gamma_eff_hz) != len(self.delta_hz):
            raise ValueError("delta_hz and gamma_eff_hz differ in length")
        return self


class FitReport(BaseModel):
    params: Dict[str, float]
    stderr: Dict[str, float]
    residual_norm: float
    iterations: int
    converged: bool
    flags: List[str] = []
