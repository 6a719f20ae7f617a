"""
Sobel gradients, both as explicit matrices over a flattened grid and as
direct image filters. Borders use replicate padding in both forms.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from taprecon.core.errors import GridError
from taprecon.geometry.grid import GridSpec

# Correlation kernels indexed [row offset + 1, col offset + 1]; rows follow +Y.
SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = SOBEL_X.T.copy()


@dataclass(frozen=True, eq=False)
class GradientOperators:
    """G_x and G_y of shape M^2 x M^2."""

    gx: np.ndarray
    gy: np.ndarray
    scale: float = 1.0

    def for_axis(self, axis: str) -> np.ndarray:
        if axis == "x":
            return self.gx
        if axis == "y":
            return self.gy
        raise ValueError(f"no gradient operator for axis {axis!r}")


def sobel_matrix(side: int, kernel: np.ndarray) -> np.ndarray:
    """Matrix form of a 3x3 correlation kernel on a ``side`` x ``side`` grid."""
    rows, cols = np.indices((side, side))
    rows, cols = rows.ravel(), cols.ravel()
    targets = rows * side + cols
    matrix = np.zeros((side * side, side * side))
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            weight = kernel[dr + 1, dc + 1]
            if weight == 0.0:
                continue
            source_rows = np.clip(rows + dr, 0, side - 1)
            source_cols = np.clip(cols + dc, 0, side - 1)
            np.add.at(matrix, (targets, source_rows * side + source_cols), weight)
    return matrix


def build_gradient_operators(grid: GridSpec, scale: float = 1.0) -> GradientOperators:
    """
    Sobel operators over the HR sensor grid.

    Args:
        grid: Grid geometry
        scale: Multiplier on the raw Sobel weights

    Raises:
        GridError: If the HR grid is smaller than the 3x3 kernel
    """
    side = grid.hr_taxels
    if side < 3:
        raise GridError(f"Sobel operators need hr_taxels >= 3, got {side}")
    return GradientOperators(
        gx=scale * sobel_matrix(side, SOBEL_X),
        gy=scale * sobel_matrix(side, SOBEL_Y),
        scale=scale,
    )


def sobel_image(image: np.ndarray, axis: str, scale: float = 1.0) -> np.ndarray:
    """Sobel response of a ``[row, col]`` image along X (columns) or Y (rows)."""
    image = np.asarray(image, dtype=np.float64)
    array_axis = {"x": 1, "y": 0}[axis]
    return scale * ndimage.sobel(image, axis=array_axis, mode="nearest")


def gradient_magnitude(image: np.ndarray, scale: float = 1.0) -> np.ndarray:
    return np.hypot(sobel_image(image, "x", scale), sobel_image(image, "y", scale))
