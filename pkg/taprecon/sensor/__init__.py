"""Linear operators of the tactile observation pipeline."""

from .clip import DEFAULT_BETA_C, ClipMatrix, build_clip_matrix
from .degradation import DegradationMatrix, build_degradation_matrix
from .gradient import GradientOperators, build_gradient_operators
from .model import (
    AXES,
    Axis,
    SensorConfig,
    SensorModel,
    build_sensor_model,
    composite_matrix,
    observe,
)
from .noise import NoiseModel

__all__ = [
    "AXES",
    "Axis",
    "ClipMatrix",
    "DEFAULT_BETA_C",
    "DegradationMatrix",
    "GradientOperators",
    "NoiseModel",
    "SensorConfig",
    "SensorModel",
    "build_clip_matrix",
    "build_degradation_matrix",
    "build_gradient_operators",
    "build_sensor_model",
    "composite_matrix",
    "observe",
]
