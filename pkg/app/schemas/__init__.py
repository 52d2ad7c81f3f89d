"""
Pydantic schemas for configuration files and request/response models
"""
from app.schemas.calibration import (
    EstimateRequest, G0EstimateResponse, SynthesizeRequest, TraceSchema
)
from app.schemas.config import (
    AnalyzerConfig, CavityConfig, DriveConfig, EnvironmentConfig, ExperimentConfig,
    InterferometerConfig, MechanicalConfig, SweepConfig
)
from app.schemas.fitting import BackactionFitRequest, FitReport, ReflectionFitRequest
from app.schemas.metrics import (
    CooperativityRequest, CooperativityResponse, ModeReport, ModesResponse
)
from app.schemas.simulation import (
    ComplexValue, OutputCoefficientsResponse, PhaseSweepRequest, PointRequest,
    SkippedPoint, SteadyStateResponse, TableResponse
)

__all__ = [
    "EstimateRequest", "G0EstimateResponse", "SynthesizeRequest", "TraceSchema",
    "AnalyzerConfig", "CavityConfig", "DriveConfig", "EnvironmentConfig", "ExperimentConfig",
    "InterferometerConfig", "MechanicalConfig", "SweepConfig",
    "BackactionFitRequest", "FitReport", "ReflectionFitRequest",
    "CooperativityRequest", "CooperativityResponse", "ModeReport", "ModesResponse",
    "ComplexValue", "OutputCoefficientsResponse", "PhaseSweepRequest", "PointRequest",
    "SkippedPoint", "SteadyStateResponse", "TableResponse",
]
