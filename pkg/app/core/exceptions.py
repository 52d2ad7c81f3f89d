"""
Toolkit exceptions and warnings
"""
from typing import Optional


class OptomechError(Exception):
    """Base class for toolkit errors"""

    exit_code: int = 4
    http_status: int = 422

    def __init__(self, message: str, *, detail: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class InvalidParameterError(OptomechError, ValueError):
    """A physical parameter is outside its domain"""


class ConfigError(OptomechError):
    """Experiment configuration could not be parsed or validated"""

    exit_code = 2


class DataError(OptomechError):
    """Input data (trace or CSV) is malformed or unusable"""


class CalibrationToneTooSmallError(DataError):
    """Calibration beat below the detectability threshold"""


class UndefinedFanoParameterError(InvalidParameterError):
    """Fano q is undefined in the overcoupled limit eta_c = 1"""


class EmptyGridError(DataError):
    """Detuning grid has no points"""


class PeakNotDetectedError(DataError):
    """Spectral feature not found above the noise floor"""


class FrequencyOutOfRangeError(DataError):
    """Requested frequency lies outside the trace span"""


class UnderResolvedError(DataError):
    """Frequency grid too coarse for the mechanical linewidth"""


class FitError(OptomechError):
    """Nonlinear least-squares failure"""

    exit_code = 3
    http_status = 409


class NoDescentDirectionError(FitError):
    """Damped normal equations are singular at maximum damping"""


class ModelEvaluationError(FitError):
    """Model returned non-finite values"""


class UnderdeterminedFitError(FitError, DataError):
    """Fewer data points than free parameters"""

    exit_code = 4
    http_status = 422


class OptomechWarning(UserWarning):
    """Non-fatal model validity condition"""


class SidebandOverlapWarning(OptomechWarning):
    """Mechanical and calibration tones are not separated by many linewidths"""


class DegenerateFanoWarning(OptomechWarning):
    """Fitted Fano parameter ran away"""


class ParametricInstabilityWarning(OptomechWarning):
    """Effective mechanical damping is non-positive"""
