"""
Sensor model: the full linear observation pipeline of a triaxial taxel array.

For a tap at pose m the LR reading of each axis is

    I_x = H(gamma_x) G_x C_m S + e_x
    I_y = H(gamma_y) G_y C_m S + e_y
    I_z = H(gamma_z)     C_m S + e_z

``SensorModel`` holds the pose-independent part ``H(gamma) G`` per axis; the
clip matrix is built per pose.
"""

from dataclasses import dataclass
from typing import Dict, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from taprecon.core.errors import DimensionError
from taprecon.geometry.grid import GridSpec
from taprecon.sensor.clip import DEFAULT_BETA_C, ClipMatrix
from taprecon.sensor.degradation import DegradationMatrix, build_degradation_matrix
from taprecon.sensor.gradient import GradientOperators, build_gradient_operators
from taprecon.sensor.noise import NoiseModel

Axis = Literal["x", "y", "z"]
AXES: Tuple[Axis, ...] = ("x", "y", "z")


class SensorConfig(BaseModel):
    """Degradation, clipping and noise parameters shared by simulator and filter."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma_x: float = Field(default=1.0, gt=0.0)
    gamma_y: float = Field(default=1.0, gt=0.0)
    gamma_z: float = Field(default=2.0, gt=0.0)
    beta_c: float = Field(default=DEFAULT_BETA_C, gt=0.0)
    sigma_x: float = Field(default=0.01, ge=0.0)
    sigma_y: float = Field(default=0.01, ge=0.0)
    sigma_z: float = Field(default=0.01, ge=0.0)
    noise_floor: float = Field(default=1e-10, ge=0.0)
    gradient_scale: float = Field(default=1.0, gt=0.0)
    sparse_clip: bool = False
    axes: Tuple[Axis, ...] = AXES

    @field_validator("axes")
    @classmethod
    def _canonical_axes(cls, value: Tuple[Axis, ...]) -> Tuple[Axis, ...]:
        if not value:
            raise ValueError("at least one axis must be enabled")
        if len(set(value)) != len(value):
            raise ValueError("axes must not repeat")
        return tuple(axis for axis in AXES if axis in value)

    def gamma(self, axis: Axis) -> float:
        return getattr(self, f"gamma_{axis}")

    def sigma(self, axis: Axis) -> float:
        return getattr(self, f"sigma_{axis}")


@dataclass(frozen=True, eq=False)
class SensorModel:
    """Precomputed operators for one grid and one SensorConfig."""

    grid: GridSpec
    config: SensorConfig
    degradation: Dict[str, DegradationMatrix]
    gradients: GradientOperators | None
    noise: NoiseModel
    projections: Dict[str, np.ndarray]

    def projection(self, axis: Axis) -> np.ndarray:
        """H(gamma_axis) G_axis, of shape N^2 x M^2 (G_z is the identity)."""
        return self.projections[axis]


def build_sensor_model(grid: GridSpec, config: SensorConfig | None = None) -> SensorModel:
    """
    Build every pose-independent operator of the observation pipeline.

    Gradient operators are skipped only for Z-only models on grids smaller
    than the Sobel kernel; such models cannot produce X/Y readings.
    """
    config = config or SensorConfig()
    degradation = {axis: build_degradation_matrix(grid, config.gamma(axis)) for axis in AXES}
    needs_gradients = grid.hr_taxels >= 3 or any(axis in config.axes for axis in ("x", "y"))
    gradients = (
        build_gradient_operators(grid, config.gradient_scale) if needs_gradients else None
    )

    projections = {"z": degradation["z"].matrix}
    if gradients is not None:
        projections["x"] = degradation["x"].matrix @ gradients.gx
        projections["y"] = degradation["y"].matrix @ gradients.gy

    noise = NoiseModel(
        sigma={axis: config.sigma(axis) for axis in AXES},
        size=grid.n_lr,
        floor=config.noise_floor,
    )
    return SensorModel(
        grid=grid,
        config=config,
        degradation=degradation,
        gradients=gradients,
        noise=noise,
        projections=projections,
    )


def observe(
    surface_hr_z: np.ndarray,
    sensor: SensorModel,
    axis: Axis,
    rng: np.random.Generator | int | None = None,
    noise: bool = True,
) -> np.ndarray:
    """
    LR reading of one axis from the HR Z-field under the sensor footprint.

    Args:
        surface_hr_z: Flattened HR Z-field, length M^2
        sensor: Sensor model
        axis: "x", "y" or "z"
        rng: Generator (or seed) for the noise draw
        noise: Draw noise with the configured sigma when True

    Returns:
        np.ndarray: LR vector of length N^2

    Raises:
        DimensionError: If the HR vector has the wrong length
    """
    surface_hr_z = np.asarray(surface_hr_z, dtype=np.float64)
    if surface_hr_z.shape != (sensor.grid.n_hr,):
        raise DimensionError(
            f"HR vector has shape {surface_hr_z.shape}, expected ({sensor.grid.n_hr},)"
        )
    if axis not in sensor.projections:
        raise DimensionError(f"axis {axis!r} is not built into this sensor model")
    reading = sensor.projection(axis) @ surface_hr_z
    if noise and sensor.noise.sigma[axis] > 0.0:
        reading = reading + sensor.noise.sample(axis, np.random.default_rng(rng))
    return reading


def composite_matrix(sensor: SensorModel, clip: ClipMatrix, axis: Axis) -> np.ndarray:
    """A_axis(m) = H(gamma_axis) G_axis C_m, of shape N^2 x (alpha M)^2."""
    return clip.left_multiply(sensor.projection(axis))
