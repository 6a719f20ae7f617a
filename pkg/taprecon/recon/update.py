"""
Kalman measurement updates for tap observations.

The surface is static, so there is no prediction step: the posterior after
one tap is the prior of the next. Each tap contributes up to three linear
observations (X, Y, Z) which are absorbed one after another.
"""

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from taprecon.core.errors import CovarianceError, DimensionError
from taprecon.geometry.grid import GridSpec
from taprecon.geometry.motion import MotionParams
from taprecon.recon.state import StateEstimate
from taprecon.sensor.clip import DEFAULT_BETA_C, ClipMatrix, build_clip_matrix
from taprecon.sensor.model import Axis, SensorModel, composite_matrix


@dataclass(frozen=True, eq=False)
class ObservationFrame:
    """One tap's triaxial LR readings and the pose they were taken at."""

    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray
    motion: MotionParams
    t: int = 0

    def __post_init__(self) -> None:
        for axis in ("ix", "iy", "iz"):
            values = getattr(self, axis)
            if not np.all(np.isfinite(values)):
                raise DimensionError(f"{axis} holds non-finite readings")

    def axis(self, axis: Axis) -> np.ndarray:
        return getattr(self, f"i{axis}")


def update_axis(
    state: StateEstimate,
    obs: np.ndarray,
    a_axis: np.ndarray,
    q_axis: np.ndarray,
) -> StateEstimate:
    """
    Condition the belief on one linear observation ``obs = A s + e``.

    Gain form: K = Sigma A^T (A Sigma A^T + Q)^-1. Only the k x k innovation
    covariance is factored. The covariance uses the Joseph form
    (I - K A) Sigma (I - K A)^T + K Q K^T, written as the rank-2k correction
    [K B] [[S, -I], [-I, 0]] [K B]^T with B = Sigma A^T, then symmetrized.

    Args:
        state: Prior belief
        obs: Observation vector of length k
        a_axis: Observation matrix, k x n
        q_axis: Noise covariance, k x k (or its diagonal)

    Returns:
        StateEstimate: Posterior with the same tap counter

    Raises:
        DimensionError: On shape mismatch
        CovarianceError: If the innovation covariance is not positive definite
    """
    obs = np.asarray(obs, dtype=np.float64)
    a_axis = np.asarray(a_axis, dtype=np.float64)
    q_axis = np.asarray(q_axis, dtype=np.float64)
    if q_axis.ndim == 1:
        q_axis = np.diag(q_axis)

    n = state.mean.shape[0]
    if a_axis.ndim != 2 or a_axis.shape[1] != n:
        raise DimensionError(f"observation matrix has shape {a_axis.shape}, state has {n} cells")
    k = a_axis.shape[0]
    if obs.shape != (k,) or q_axis.shape != (k, k):
        raise DimensionError(
            f"observation {obs.shape} / noise {q_axis.shape} do not match {k} rows"
        )

    cross = state.cov @ a_axis.T
    innovation_cov = a_axis @ cross + q_axis
    innovation_cov = 0.5 * (innovation_cov + innovation_cov.T)
    try:
        factor = cho_factor(innovation_cov, lower=True, check_finite=False)
    except LinAlgError as e:
        raise CovarianceError(
            "innovation covariance is not positive definite; "
            "set sensor.noise_floor above zero"
        ) from e

    gain = cho_solve(factor, cross.T, check_finite=False).T
    mean = state.mean + gain @ (obs - a_axis @ state.mean)

    identity = np.eye(k)
    middle = np.block([[innovation_cov, -identity], [-identity, np.zeros((k, k))]])
    stacked = np.hstack([gain, cross])
    cov = (stacked @ middle) @ stacked.T
    cov += state.cov
    np.add(cov, cov.T, out=cov)
    cov *= 0.5

    return StateEstimate(mean=mean, cov=cov, t=state.t)


def update_tap(
    state: StateEstimate,
    frame: ObservationFrame,
    sensor: SensorModel,
    *,
    clip: ClipMatrix | None = None,
    axes: Sequence[Axis] | None = None,
) -> StateEstimate:
    """
    Sequential triaxial update for one tap.

    Args:
        state: Belief before the tap
        frame: The tap's readings
        sensor: Sensor model shared with the simulator
        clip: Clip matrix for ``frame.motion`` if already built
        axes: Update order; defaults to the enabled axes in X, Y, Z order

    Returns:
        StateEstimate: Belief after the tap, with ``t`` incremented
    """
    if clip is None:
        clip = build_clip_matrix(
            sensor.grid, frame.motion, sensor.config.beta_c, sensor.config.sparse_clip
        )
    for axis in axes if axes is not None else sensor.config.axes:
        state = update_axis(
            state,
            frame.axis(axis),
            composite_matrix(sensor, clip, axis),
            sensor.noise.covariance(axis),
        )
    return replace(state, t=state.t + 1)


def predict_hr(
    state: StateEstimate,
    m: MotionParams,
    grid: GridSpec,
    beta_c: float = DEFAULT_BETA_C,
    *,
    clip: ClipMatrix | None = None,
    with_variance: bool = False,
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """
    HR sensor data expected at pose ``m`` under the current belief.

    Returns:
        C_m mu, and diag(C_m Sigma C_m^T) as well when ``with_variance``
    """
    if clip is None:
        clip = build_clip_matrix(grid, m, beta_c)
    prediction = clip.apply(state.mean)
    if not with_variance:
        return prediction
    weighted = np.asarray(clip.matrix @ state.cov)
    dense = clip.dense()
    return prediction, np.einsum("ij,ij->i", weighted, dense)
