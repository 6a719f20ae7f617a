"""
Per-axis Gaussian sensor noise.
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """
    Diagonal noise covariances Q_x, Q_y, Q_z over the N^2 LR taxels.

    ``sigma`` drives the simulated noise; the filter sees sigma^2 + floor.
    """

    sigma: Dict[str, float]
    size: int
    floor: float = 0.0

    def variance(self, axis: str) -> float:
        return self.sigma[axis] ** 2 + self.floor

    def covariance(self, axis: str) -> np.ndarray:
        return np.diag(np.full(self.size, self.variance(axis)))

    def sample(self, axis: str, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(0.0, self.sigma[axis], self.size)
