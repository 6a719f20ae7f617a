"""
Clip matrix: extracts the HR sensor footprint from the state at a tap pose.
"""

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist

from taprecon.core.errors import DimensionError
from taprecon.core.logging import log_warning
from taprecon.geometry.grid import GridSpec, cell_centers
from taprecon.geometry.motion import MotionParams, transform_points

DEFAULT_BETA_C = 1e-3
SPARSE_DROP_BELOW = 1e-12


@dataclass(frozen=True, eq=False)
class ClipMatrix:
    """Row-stochastic M^2 x (alpha M)^2 operator for one pose."""

    matrix: np.ndarray | sparse.csr_matrix
    motion: MotionParams
    beta: float
    fallback_rows: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.matrix)

    def apply(self, state_values: np.ndarray) -> np.ndarray:
        """C @ s for a flattened state map."""
        state_values = np.asarray(state_values, dtype=np.float64)
        if state_values.shape[0] != self.shape[1]:
            raise DimensionError(
                f"state vector has {state_values.shape[0]} entries, expected {self.shape[1]}"
            )
        return np.asarray(self.matrix @ state_values)

    def left_multiply(self, lhs: np.ndarray) -> np.ndarray:
        """lhs @ C as a dense array."""
        if self.is_sparse:
            return np.asarray((self.matrix.T @ np.asarray(lhs).T).T)
        return lhs @ self.matrix

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else self.matrix


def build_clip_matrix(
    grid: GridSpec,
    m: MotionParams,
    beta_c: float = DEFAULT_BETA_C,
    use_sparse: bool = False,
) -> ClipMatrix:
    """
    Build the soft indicator C_t for pose ``m``.

    Row i holds exp(-||v_j - u_i||^2 / beta_c) over the state cell centers v_j,
    divided by the row sum, where u_i is HR cell i moved into the state frame.
    Rows whose weights all underflow fall back to the nearest state cell.

    Args:
        grid: Grid geometry
        m: Tap pose
        beta_c: Similarity bandwidth in mm^2
        use_sparse: Drop entries below 1e-12 and return a CSR matrix

    Returns:
        ClipMatrix: The operator together with the fallback row count
    """
    if beta_c <= 0:
        raise ValueError("beta_c must be positive")

    footprint = transform_points(m, cell_centers(grid, "hr_sensor"))
    weights = cdist(footprint, cell_centers(grid, "state"), "sqeuclidean")
    nearest = weights.argmin(axis=1)

    np.multiply(weights, -1.0 / beta_c, out=weights)
    np.exp(weights, out=weights)
    totals = weights.sum(axis=1)

    degenerate = np.flatnonzero(~(totals > 0.0))
    if degenerate.size:
        weights[degenerate] = 0.0
        weights[degenerate, nearest[degenerate]] = 1.0
        totals[degenerate] = 1.0
        log_warning(
            "Clip rows fell back to nearest-cell assignment",
            extra={"rows": int(degenerate.size), "pose": m.model_dump()},
        )
    weights /= totals[:, None]

    if use_sparse:
        weights[weights < SPARSE_DROP_BELOW] = 0.0
        weights /= weights.sum(axis=1, keepdims=True)
        matrix: np.ndarray | sparse.csr_matrix = sparse.csr_matrix(weights)
    else:
        matrix = weights

    return ClipMatrix(
        matrix=matrix, motion=m, beta=beta_c, fallback_rows=int(degenerate.size)
    )
