"""
Gaussian degradation from HR to LR taxels.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from taprecon.geometry.grid import GridSpec, cell_centers


@dataclass(frozen=True, eq=False)
class DegradationMatrix:
    """N^2 x M^2 Gaussian weights, each row scaled so its maximum is 1."""

    matrix: np.ndarray
    gamma: float


def build_degradation_matrix(grid: GridSpec, gamma: float) -> DegradationMatrix:
    """
    Build H(gamma).

    Entry (i, j) is exp(-||v_hr_j - v_lr_i||^2 / gamma) divided by the row
    maximum. The division is done in log space so rows never underflow.

    Args:
        grid: Grid geometry
        gamma: Degradation bandwidth in mm^2

    Returns:
        DegradationMatrix: H(gamma)
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    logits = -cdist(
        cell_centers(grid, "lr_sensor"), cell_centers(grid, "hr_sensor"), "sqeuclidean"
    ) / gamma
    logits -= logits.max(axis=1, keepdims=True)
    return DegradationMatrix(matrix=np.exp(logits), gamma=gamma)
