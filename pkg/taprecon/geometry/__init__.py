"""Grid geometry, coordinate frames and the tap action space."""

from .grid import (
    CellLocation,
    GridSpec,
    cell_centers,
    flat_index,
    grid_position,
    nearest_state_cells,
    to_image,
)
from .motion import ActionSpace, MotionParams, transform_points, transform_to_state_frame

__all__ = [
    "ActionSpace",
    "CellLocation",
    "GridSpec",
    "MotionParams",
    "cell_centers",
    "flat_index",
    "grid_position",
    "nearest_state_cells",
    "to_image",
    "transform_points",
    "transform_to_state_frame",
]
