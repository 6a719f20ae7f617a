"""
Planar sensor poses and the discretized action space.
"""

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict

from taprecon.core.errors import GridError
from taprecon.geometry.grid import CellLocation, GridSpec

# Slack used when deciding whether a span is a whole number of steps.
_STEP_TOLERANCE = 1e-9


class MotionParams(BaseModel):
    """Sensor pose relative to the first tap: offsets in mm, rotation in radians."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def rotation(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s], [s, c]])

    def translation(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def inverse(self) -> "MotionParams":
        """The pose that undoes this one: (-R(-theta) (x, y), -theta)."""
        back = MotionParams(theta=-self.theta).rotation() @ self.translation()
        return MotionParams(x=-back[0], y=-back[1], theta=-self.theta)


def transform_points(m: MotionParams, points: np.ndarray) -> np.ndarray:
    """Map sensor-frame points of shape (k, 2) into the state frame."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return points @ m.rotation().T + m.translation()


def transform_to_state_frame(m: MotionParams, v: CellLocation) -> CellLocation:
    """
    Rigid transform u = R(theta) v + (x, y) of one sensor-frame location.

    Raises:
        GridError: If ``v`` is not a sensor-frame location
    """
    if v.frame != "sensor":
        raise GridError(f"expected a sensor-frame location, got frame {v.frame!r}")
    u = transform_points(m, v.as_array())[0]
    return CellLocation(position=(float(u[0]), float(u[1])), frame="state")


def _span(low: float, high: float, step: float) -> np.ndarray:
    count = int(math.floor((high - low) / step + _STEP_TOLERANCE)) + 1
    return low + np.arange(count) * step


@dataclass(frozen=True, eq=False)
class ActionSpace:
    """
    Candidate tap poses X x Y x Theta.

    Enumeration order is x-major, then y, then theta; index
    ``(ix * len(ys) + iy) * len(thetas) + itheta``. All poses keep the sensor
    center inside the state region.
    """

    xs: np.ndarray
    ys: np.ndarray
    thetas: np.ndarray
    x_step: float
    theta_step: float | None

    @classmethod
    def build(
        cls, grid: GridSpec, x_step: float, theta_step: float | None
    ) -> "ActionSpace":
        """
        Enumerate the discretized action space.

        Args:
            grid: Grid geometry, the translations span the state side
            x_step: Translation step in mm
            theta_step: Rotation step in radians; ``None`` keeps theta at 0

        Returns:
            ActionSpace: Translations from -l_state/2 to +l_state/2 and
            rotations from -pi/2 to +pi/2, both endpoints included when the
            span is a whole number of steps
        """
        if x_step <= 0:
            raise GridError("x_step must be positive")
        half = grid.state_side / 2.0
        xs = _span(-half, half, x_step)
        if theta_step is None:
            thetas = np.zeros(1)
        else:
            if theta_step <= 0:
                raise GridError("theta_step must be positive")
            thetas = _span(-math.pi / 2.0, math.pi / 2.0, theta_step)
        return cls(
            xs=xs, ys=xs.copy(), thetas=thetas, x_step=x_step, theta_step=theta_step
        )

    @property
    def shape(self) -> tuple[int, int, int]:
        return len(self.xs), len(self.ys), len(self.thetas)

    def __len__(self) -> int:
        nx, ny, nt = self.shape
        return nx * ny * nt

    def __getitem__(self, index: int) -> MotionParams:
        if not 0 <= index < len(self):
            raise IndexError(index)
        _, ny, nt = self.shape
        ix, rest = divmod(index, ny * nt)
        iy, it = divmod(rest, nt)
        return MotionParams(
            x=float(self.xs[ix]), y=float(self.ys[iy]), theta=float(self.thetas[it])
        )

    def __iter__(self) -> Iterator[MotionParams]:
        for index in range(len(self)):
            yield self[index]
