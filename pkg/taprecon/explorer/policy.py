"""
Next-tap selection.

A candidate pose is scored by summing a map over the state cells nearest to
the pose's M^2 HR footprint centers. With the default clip bandwidth this
is the same quantity as summing C_m D, without building C_m per candidate.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Literal

import numpy as np

from taprecon.core.logging import log_debug
from taprecon.explorer.maps import DecisionMaps
from taprecon.geometry.grid import GridSpec, cell_centers, to_image
from taprecon.geometry.motion import ActionSpace, MotionParams

Policy = Literal["active", "pure_uncertainty", "random"]
POLICIES: tuple[Policy, ...] = ("active", "pure_uncertainty", "random")

# Scores within this relative distance of the best are ties.
TIE_TOLERANCE = 1e-12


def _rotated_footprint(grid: GridSpec, theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return cell_centers(grid, "hr_sensor") @ np.array([[c, -s], [s, c]]).T


def _cell_index(coords: np.ndarray, grid: GridSpec) -> np.ndarray:
    origin = -grid.state_side / 2.0 + grid.state_pitch / 2.0
    return np.floor((coords - origin) / grid.state_pitch + 0.5).astype(np.int64)


def _step_ratio(actions: ActionSpace, grid: GridSpec) -> int | None:
    """Translation step in state cells, if it is a whole number."""
    ratio = actions.x_step / grid.state_pitch
    nearest = int(round(ratio))
    if nearest >= 1 and abs(ratio - nearest) < 1e-9:
        return nearest
    return None


def _scores_by_slices(
    image: np.ndarray, actions: ActionSpace, grid: GridSpec, theta: float, step: int
) -> np.ndarray:
    """
    Scores for every translation at one rotation, as an [iy, ix] array.

    Translations move the footprint by whole cells, so each footprint point
    contributes a strided slice of the edge-padded map.
    """
    footprint = _rotated_footprint(grid, theta)
    base_cols = _cell_index(actions.xs[0] + footprint[:, 0], grid)
    base_rows = _cell_index(actions.ys[0] + footprint[:, 1], grid)
    offsets, counts = np.unique(
        np.column_stack([base_rows, base_cols]), axis=0, return_counts=True
    )

    side = image.shape[0]
    ny, nx = len(actions.ys), len(actions.xs)
    low_r = min(0, int(offsets[:, 0].min()))
    low_c = min(0, int(offsets[:, 1].min()))
    high_r = max(side - 1, int(offsets[:, 0].max()) + step * (ny - 1))
    high_c = max(side - 1, int(offsets[:, 1].max()) + step * (nx - 1))
    padded = np.pad(
        image, ((-low_r, high_r - side + 1), (-low_c, high_c - side + 1)), mode="edge"
    )

    scores = np.zeros((ny, nx))
    for (row, col), count in zip(offsets.tolist(), counts.tolist()):
        r0, c0 = row - low_r, col - low_c
        window = padded[r0 : r0 + step * (ny - 1) + 1 : step, c0 : c0 + step * (nx - 1) + 1 : step]
        if count == 1:
            scores += window
        else:
            scores += count * window
    return scores


def _scores_by_gather(
    image: np.ndarray, actions: ActionSpace, grid: GridSpec, theta: float
) -> np.ndarray:
    """Scores for every translation at one rotation, by direct lookup."""
    footprint = _rotated_footprint(grid, theta)
    side = image.shape[0]
    cols = np.clip(_cell_index(actions.xs[:, None] + footprint[None, :, 0], grid), 0, side - 1)
    rows = np.clip(_cell_index(actions.ys[:, None] + footprint[None, :, 1], grid), 0, side - 1)
    scores = np.empty((len(actions.ys), len(actions.xs)))
    for iy in range(len(actions.ys)):
        scores[iy] = image[rows[iy][None, :], cols].sum(axis=1)
    return scores


def footprint_scores(
    score_map: np.ndarray,
    actions: ActionSpace,
    grid: GridSpec,
    workers: int | None = None,
    method: Literal["auto", "slices", "gather"] = "auto",
) -> np.ndarray:
    """
    Footprint sum of ``score_map`` for every candidate, in enumeration order.

    Rotations are scored in parallel; results are placed by index, so the
    output does not depend on the number of workers.
    """
    image = to_image(np.asarray(score_map, dtype=np.float64), grid.state_taxels)
    step = _step_ratio(actions, grid)
    if method == "slices" and step is None:
        raise ValueError("slice scoring needs a translation step that is a whole number of cells")
    use_slices = method == "slices" or (method == "auto" and step is not None)

    def score_theta(theta: float) -> np.ndarray:
        if use_slices:
            return _scores_by_slices(image, actions, grid, theta, step)
        return _scores_by_gather(image, actions, grid, theta)

    thetas = actions.thetas.tolist()
    if workers is not None and workers > 1 and len(thetas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_theta = list(pool.map(score_theta, thetas))
    else:
        per_theta = [score_theta(theta) for theta in thetas]

    # [iy, ix, itheta] -> [ix, iy, itheta]
    return np.stack(per_theta, axis=-1).transpose(1, 0, 2).ravel()


def best_index(scores: np.ndarray) -> int:
    """Lowest enumeration index among the top-scoring candidates."""
    top = scores.max()
    tolerance = TIE_TOLERANCE * abs(top)
    return int(np.flatnonzero(scores >= top - tolerance)[0])


def select_action(
    maps: DecisionMaps,
    actions: ActionSpace,
    grid: GridSpec,
    policy: Policy,
    rng: np.random.Generator | int | None = None,
    workers: int | None = None,
) -> MotionParams:
    """
    Pick the next tap pose.

    Args:
        maps: Maps computed from the current belief
        actions: Candidate poses
        grid: Grid geometry
        policy: "active" scores D_t, "pure_uncertainty" scores U_t,
            "random" draws uniformly
        rng: Generator (or seed) for the random policy
        workers: Threads used for scoring

    Returns:
        MotionParams: The selected pose
    """
    if len(actions) == 0:
        raise ValueError("action space is empty")
    if policy == "random":
        return actions[int(np.random.default_rng(rng).integers(len(actions)))]
    if policy == "active":
        score_map = maps.decision
    elif policy == "pure_uncertainty":
        score_map = maps.uncertainty
    else:
        raise ValueError(f"unknown policy {policy!r}")

    scores = footprint_scores(score_map, actions, grid, workers=workers)
    index = best_index(scores)
    log_debug(
        "Selected next tap",
        extra={"policy": policy, "index": index, "score": float(scores[index])},
    )
    return actions[index]
