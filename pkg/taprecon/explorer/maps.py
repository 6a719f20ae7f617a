"""
Gradient, uncertainty and decision maps over the state grid.
"""

import math
from dataclasses import dataclass

import numpy as np

from taprecon.core.errors import CovarianceError
from taprecon.geometry.grid import GridSpec, to_image
from taprecon.recon.state import StateEstimate
from taprecon.sensor.gradient import gradient_magnitude

DEFAULT_TRANSITION_RATE = 0.7


@dataclass(frozen=True, eq=False)
class DecisionMaps:
    """G_t, U_t and D_t = G_t * U_t, flattened over the state grid."""

    gradient: np.ndarray
    uncertainty: np.ndarray
    decision: np.ndarray
    transition_rate: float
    t: int


def gradient_map(
    state: StateEstimate,
    transition_rate: float,
    t: int,
    grid: GridSpec,
    gradient_scale: float = 1.0,
) -> np.ndarray:
    """
    Contour map blended towards all-ones early on.

    G_t = (1 - exp(-lambda t)) |grad mu_t| + exp(-lambda t), where
    |grad mu_t| is the Sobel gradient magnitude scaled to a maximum of 1.
    """
    if transition_rate < 0:
        raise ValueError("transition_rate must be non-negative")
    explore = math.exp(-transition_rate * t)
    magnitude = gradient_magnitude(
        to_image(state.mean, grid.state_taxels), gradient_scale
    ).ravel()
    peak = magnitude.max(initial=0.0)
    if peak > 0.0:
        magnitude /= peak
    return (1.0 - explore) * magnitude + explore


def uncertain_map(state: StateEstimate) -> np.ndarray:
    """
    Per-cell Gaussian entropy 0.5 log(2 pi var) + 0.5.

    Raises:
        CovarianceError: If any variance is not strictly positive
    """
    variances = np.diag(state.cov)
    if np.any(variances <= 0.0):
        bad = int(np.count_nonzero(variances <= 0.0))
        raise CovarianceError(f"{bad} state cells have non-positive variance")
    return 0.5 * np.log(2.0 * math.pi * variances) + 0.5


def decision_maps(
    state: StateEstimate,
    grid: GridSpec,
    transition_rate: float = DEFAULT_TRANSITION_RATE,
    t: int | None = None,
    gradient_scale: float = 1.0,
) -> DecisionMaps:
    t = state.t if t is None else t
    gradient = gradient_map(state, transition_rate, t, grid, gradient_scale)
    uncertainty = uncertain_map(state)
    return DecisionMaps(
        gradient=gradient,
        uncertainty=uncertainty,
        decision=gradient * uncertainty,
        transition_rate=transition_rate,
        t=t,
    )
