"""
Grid geometry and flattening conventions.

Every grid in the project is square, centered on its frame origin, with X
pointing right and Y pointing up. Images are stored as ``[row, col]`` arrays
where the row index grows with Y and the column index grows with X, and they
are flattened row-major: ``index = row * side + col``.
"""

from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from taprecon.core.errors import GridError

GridName = Literal["state", "hr_sensor", "lr_sensor"]
Frame = Literal["state", "sensor"]


class GridSpec(BaseModel):
    """Sensor, HR and state grid sizes. Defaults are the full-size setup."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sensor_taxels: int = Field(default=4, ge=1, description="N, LR taxels per side")
    hr_taxels: int = Field(default=40, ge=1, description="M, HR taxels per side")
    scale: float = Field(default=2.0, ge=1.0, description="alpha, state side / sensor side")
    sensor_side: float = Field(default=20.0, gt=0.0, description="sensor side in mm")

    @model_validator(mode="after")
    def _check_sizes(self) -> "GridSpec":
        if self.hr_taxels < self.sensor_taxels:
            raise ValueError("hr_taxels must be at least sensor_taxels")
        cells = self.scale * self.hr_taxels
        if abs(cells - round(cells)) > 1e-9:
            raise ValueError("scale * hr_taxels must be a whole number of state cells")
        return self

    @property
    def state_side(self) -> float:
        return self.scale * self.sensor_side

    @property
    def state_taxels(self) -> int:
        return int(round(self.scale * self.hr_taxels))

    @property
    def lr_resolution(self) -> float:
        """d_LR in taxels per mm."""
        return self.sensor_taxels / self.sensor_side

    @property
    def hr_resolution(self) -> float:
        """d_HR in taxels per mm."""
        return self.hr_taxels / self.sensor_side

    @property
    def lr_pitch(self) -> float:
        return self.sensor_side / self.sensor_taxels

    @property
    def hr_pitch(self) -> float:
        return self.sensor_side / self.hr_taxels

    @property
    def state_pitch(self) -> float:
        return self.state_side / self.state_taxels

    @property
    def n_state(self) -> int:
        return self.state_taxels**2

    @property
    def n_hr(self) -> int:
        return self.hr_taxels**2

    @property
    def n_lr(self) -> int:
        return self.sensor_taxels**2

    def side_and_count(self, which: GridName) -> Tuple[float, int]:
        if which == "state":
            return self.state_side, self.state_taxels
        if which == "hr_sensor":
            return self.sensor_side, self.hr_taxels
        if which == "lr_sensor":
            return self.sensor_side, self.sensor_taxels
        raise GridError(f"unknown grid {which!r}")


@dataclass(frozen=True)
class CellLocation:
    """A 2-D point in mm, tagged with the frame it is expressed in."""

    position: Tuple[float, float]
    frame: Frame = "state"

    def as_array(self) -> np.ndarray:
        return np.asarray(self.position, dtype=np.float64)


def axis_centers(side: float, count: int) -> np.ndarray:
    """Cell-center coordinates along one axis, centered on zero."""
    return -side / 2.0 + (np.arange(count) + 0.5) * (side / count)


def cell_centers(grid: GridSpec, which: GridName) -> np.ndarray:
    """
    Cell centers of one of the three grids, in mm, in flattening order.

    Args:
        grid: Grid geometry
        which: "state", "hr_sensor" or "lr_sensor"

    Returns:
        np.ndarray: Array of shape (count**2, 2) holding (x, y) per cell
    """
    side, count = grid.side_and_count(which)
    centers = axis_centers(side, count)
    xs, ys = np.meshgrid(centers, centers)
    return np.column_stack([xs.ravel(), ys.ravel()])


def flat_index(row: int, col: int, side: int) -> int:
    if not (0 <= row < side and 0 <= col < side):
        raise GridError(f"cell ({row}, {col}) outside a {side}x{side} grid")
    return row * side + col


def grid_position(index: int, side: int) -> Tuple[int, int]:
    if not 0 <= index < side * side:
        raise GridError(f"index {index} outside a {side}x{side} grid")
    return divmod(index, side)


def to_image(values: np.ndarray, side: int) -> np.ndarray:
    """Reshape a flattened map into its ``[row, col]`` image."""
    values = np.asarray(values)
    if values.size != side * side:
        raise GridError(f"{values.size} values do not fill a {side}x{side} grid")
    return values.reshape(side, side)


def nearest_state_cells(grid: GridSpec, points: np.ndarray) -> np.ndarray:
    """
    Flat index of the state cell nearest to each point.

    Points outside the state region map to the closest border cell.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    side = grid.state_taxels
    origin = -grid.state_side / 2.0 + grid.state_pitch / 2.0
    cols = np.floor((points[:, 0] - origin) / grid.state_pitch + 0.5).astype(np.int64)
    rows = np.floor((points[:, 1] - origin) / grid.state_pitch + 0.5).astype(np.int64)
    np.clip(cols, 0, side - 1, out=cols)
    np.clip(rows, 0, side - 1, out=rows)
    return rows * side + cols
