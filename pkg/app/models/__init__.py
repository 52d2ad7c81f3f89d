"""
Domain records
"""
from app.models.parameters import (
    Drive, Environment, Interferometer, MeasuredMode, MechanicalMode, OpticalCavity
)
from app.models.results import (
    BackactionPoint, FanoParameters, FitResult, G0BiasSweep, G0Estimate,
    OutputCoefficients, SpectrumGrid, SpectrumTrace, SteadyStateAmplitudes
)

__all__ = [
    "Drive", "Environment", "Interferometer", "MeasuredMode", "MechanicalMode", "OpticalCavity",
    "BackactionPoint", "FanoParameters", "FitResult", "G0BiasSweep", "G0Estimate",
    "OutputCoefficients", "SpectrumGrid", "SpectrumTrace", "SteadyStateAmplitudes",
]
