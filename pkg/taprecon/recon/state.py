"""
Gaussian belief over the flattened state map and its prior.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import LinAlgError, cholesky, eigvalsh
from scipy.spatial.distance import pdist, squareform

from taprecon.core.errors import CovarianceError
from taprecon.core.logging import log_debug
from taprecon.geometry.grid import GridSpec, cell_centers

PRIOR_JITTER = 1e-8


class PriorConfig(BaseModel):
    """
    Squared-exponential prior Sigma_0(i, j) = A exp(-||v_i - v_j||^2 / r^2).

    ``length_scale`` defaults to one LR taxel pitch when left unset, so a tap
    lowers the variance across its whole footprint and not only under the
    taxel centers.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    amplitude: float = Field(default=1.0, gt=0.0)
    length_scale: float | None = Field(default=None, gt=0.0)
    mean: float = 0.0

    def resolved_length_scale(self, grid: GridSpec) -> float:
        if self.length_scale is not None:
            return self.length_scale
        return grid.lr_pitch


@dataclass(eq=False)
class StateEstimate:
    """Mean and covariance of S_t after ``t`` taps."""

    mean: np.ndarray
    cov: np.ndarray
    t: int = 0

    @property
    def trace(self) -> float:
        return float(np.trace(self.cov))

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.cov).copy()

    def copy(self) -> "StateEstimate":
        return replace(self, mean=self.mean.copy(), cov=self.cov.copy())


@dataclass(frozen=True)
class CovarianceReport:
    asymmetry: float
    trace: float
    min_eigenvalue: float | None = None

    def violations(self, tolerance: float = 1e-9) -> list[str]:
        found = []
        if self.asymmetry > tolerance:
            found.append(f"asymmetry {self.asymmetry:.3e}")
        if self.min_eigenvalue is not None and self.min_eigenvalue < -tolerance:
            found.append(f"min eigenvalue {self.min_eigenvalue:.3e}")
        return found


@lru_cache(maxsize=4)
def prior_covariance(grid: GridSpec, prior: PriorConfig) -> np.ndarray:
    """
    Sigma_0 over the state cell centers plus diagonal jitter.

    The result is cached and read-only; callers copy it.

    Raises:
        CovarianceError: If the jittered kernel is not positive definite
    """
    length_scale = prior.resolved_length_scale(grid)
    distances = squareform(pdist(cell_centers(grid, "state"), "sqeuclidean"))
    np.multiply(distances, -1.0 / length_scale**2, out=distances)
    np.exp(distances, out=distances)
    distances *= prior.amplitude
    distances[np.diag_indices_from(distances)] += PRIOR_JITTER * prior.amplitude

    try:
        cholesky(distances, lower=True, check_finite=False)
    except LinAlgError as e:
        smallest = float(eigvalsh(distances, subset_by_index=[0, 0])[0])
        raise CovarianceError(
            f"prior covariance is not positive definite (smallest eigenvalue {smallest:.3e})"
        ) from e

    log_debug(
        "Built prior covariance",
        extra={"cells": grid.n_state, "length_scale": length_scale},
    )
    distances.setflags(write=False)
    return distances


def init_state(grid: GridSpec, prior: PriorConfig | None = None) -> StateEstimate:
    """
    Prior belief before the first tap.

    Args:
        grid: Grid geometry
        prior: Prior parameters

    Returns:
        StateEstimate: Constant mean ``prior.mean`` and the kernel covariance
    """
    prior = prior or PriorConfig()
    return StateEstimate(
        mean=np.full(grid.n_state, prior.mean, dtype=np.float64),
        cov=np.array(prior_covariance(grid, prior)),
        t=0,
    )


def covariance_report(state: StateEstimate, eigenvalues: bool = False) -> CovarianceReport:
    """Symmetry, trace and optionally the smallest eigenvalue of Sigma."""
    asymmetry = float(np.max(np.abs(state.cov - state.cov.T))) if state.cov.size else 0.0
    smallest = None
    if eigenvalues:
        smallest = float(eigvalsh(state.cov, subset_by_index=[0, 0])[0])
    return CovarianceReport(asymmetry=asymmetry, trace=state.trace, min_eigenvalue=smallest)
