"""
Tap primitive: the simulated sensor pressing on the hidden surface.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict

from taprecon.geometry.grid import GridSpec
from taprecon.geometry.motion import MotionParams
from taprecon.recon.update import ObservationFrame
from taprecon.sensor.clip import ClipMatrix, build_clip_matrix
from taprecon.sensor.model import AXES, SensorModel, observe
from taprecon.simulator.surface import GroundTruthSurface


class TapCommand(BaseModel):
    model_config = ConfigDict(frozen=True)

    motion: MotionParams
    noise: bool = True


def execute_tap(
    surface: GroundTruthSurface,
    cmd: TapCommand,
    sensor: SensorModel,
    grid: GridSpec,
    rng: np.random.Generator | int | None = None,
    t: int = 0,
    clip: ClipMatrix | None = None,
) -> ObservationFrame:
    """
    Simulate one tap and return its LR frame.

    The HR Z-field is C_m S_true; each axis reading then goes through
    ``observe`` with its own noise draw, X first, then Y, then Z, all from
    the same generator. The commanded pose is echoed back unchanged.

    Args:
        surface: Hidden ground truth
        cmd: Pose and noise switch
        sensor: Sensor model used to synthesize readings
        grid: Grid geometry
        rng: Generator (or seed) for the noise draws
        t: Tap index stored on the frame
        clip: Clip matrix for ``cmd.motion`` if already built

    Returns:
        ObservationFrame: Readings for all three axes

    Raises:
        DimensionError: If ``sensor`` was built without an X or Y projection
    """
    generator = np.random.default_rng(rng)
    if clip is None:
        clip = build_clip_matrix(
            grid, cmd.motion, sensor.config.beta_c, sensor.config.sparse_clip
        )
    hr_z = clip.apply(surface.vector)

    readings = {
        axis: observe(hr_z, sensor, axis, generator, noise=cmd.noise) for axis in AXES
    }

    return ObservationFrame(
        ix=readings["x"], iy=readings["y"], iz=readings["z"], motion=cmd.motion, t=t
    )
