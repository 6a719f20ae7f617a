"""
One episode: tap, observe, update, select, repeated for the tap budget.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from taprecon.core.errors import DimensionError, EpisodeError
from taprecon.core.logging import log_error, log_info, log_warning
from taprecon.explorer.maps import decision_maps
from taprecon.explorer.policy import Policy, select_action
from taprecon.geometry.grid import GridSpec, cell_centers, nearest_state_cells, to_image
from taprecon.geometry.motion import MotionParams, transform_points
from taprecon.harness.config import ExperimentConfig
from taprecon.metrics.episode_log import EpisodeLog, EpisodeMetadata, TapRecord
from taprecon.metrics.quality import SSIM_WINDOW, mse, mse_visited, ssim
from taprecon.recon.state import StateEstimate, covariance_report, init_state
from taprecon.recon.update import predict_hr, update_tap
from taprecon.sensor.clip import build_clip_matrix
from taprecon.sensor.model import AXES, build_sensor_model
from taprecon.simulator.surface import GroundTruthSurface, load_surface
from taprecon.simulator.tap import TapCommand, execute_tap

# Relative slack on the per-tap trace decrease and on symmetry.
TRACE_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-9


@dataclass(eq=False)
class EpisodeResult:
    log: EpisodeLog
    state: StateEstimate
    truth: GroundTruthSurface
    actions: List[MotionParams] = field(default_factory=list)
    snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    decision_snapshots: Dict[int, np.ndarray] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)


def footprint_cells(grid: GridSpec, motion: MotionParams) -> np.ndarray:
    """State cells under the HR footprint at ``motion``; off-region points are dropped."""
    points = transform_points(motion, cell_centers(grid, "hr_sensor"))
    half = grid.state_side / 2.0
    inside = np.all(np.abs(points) <= half, axis=1)
    return np.unique(nearest_state_cells(grid, points[inside]))


def _covariance_checks(
    state: StateEstimate, previous_trace: float, t: int, eigenvalues: bool
) -> List[str]:
    report = covariance_report(state, eigenvalues=eigenvalues)
    found = [
        f"tap {t}: {problem}"
        for problem in report.violations(SYMMETRY_TOLERANCE * max(1.0, report.trace))
    ]
    if report.trace > previous_trace + TRACE_TOLERANCE * max(1.0, previous_trace):
        found.append(f"tap {t}: trace rose from {previous_trace:.6g} to {report.trace:.6g}")
    return found


def run_episode(
    config: ExperimentConfig,
    surface: str | None = None,
    policy: Policy | None = None,
    seed: int | None = None,
    *,
    workers: int | None = None,
    initial: StateEstimate | None = None,
) -> EpisodeResult:
    """
    Run one seeded episode.

    The first tap is always at the origin pose. Afterwards the policy picks
    each pose from the belief so far. The policy's random draws come from
    ``default_rng([seed, 0])`` and the noise of tap t from
    ``default_rng([seed, 1, t])``, so runs are reproducible for any number
    of scoring workers.

    With ``initial`` the episode continues a saved belief: tap indices carry
    on from ``initial.t`` and the origin tap is skipped, so a run resumed
    after k taps replays the noise of an uninterrupted run with the same seed.

    Args:
        config: Validated experiment config
        surface: Surface id; defaults to the first configured surface
        policy: Defaults to ``config.explorer.policy``
        seed: Defaults to the first configured seed
        workers: Threads for action scoring
        initial: Belief to continue from, e.g. a restored checkpoint

    Returns:
        EpisodeResult: Log, final belief, snapshots and covariance findings

    Raises:
        EpisodeError: On any failure, tagged with the tap index (0 for setup)
    """
    policy = policy or config.explorer.policy
    seed = config.episode.seeds[0] if seed is None else seed
    surface = surface or config.surface_ids[0]
    grid = config.grid

    try:
        truth = load_surface(config.surface(surface), grid)
        sensor = build_sensor_model(grid, config.sensor)
        sim_sensor = sensor
        if config.simulator.mismatched or config.sensor.axes != AXES:
            sim_sensor = build_sensor_model(grid, config.simulator.sensor_config(config.sensor))
        actions = config.explorer.action_space(grid)
        if initial is None:
            state = init_state(grid, config.prior)
        elif initial.mean.shape != (grid.n_state,):
            raise DimensionError(
                f"initial belief has {initial.mean.size} cells, the grid has {grid.n_state}"
            )
        else:
            state = initial.copy()
    except Exception as e:
        log_error("Episode setup failed", extra={"surface": surface, "error": str(e)})
        raise EpisodeError(str(e), 0) from e

    transition_rate = 0.0 if policy == "pure_uncertainty" else config.explorer.transition_rate
    metadata = EpisodeMetadata(
        policy=policy,
        transition_rate=transition_rate,
        seed=seed,
        surface_id=surface,
        grid=grid,
        noise={axis: config.sensor.sigma(axis) if config.simulator.noise else 0.0 for axis in AXES},
        axes=config.sensor.axes,
        mismatched=config.simulator.mismatched,
        resumed_at=state.t,
    )
    result = EpisodeResult(log=EpisodeLog(metadata), state=state, truth=truth)

    side = grid.state_taxels
    truth_image = truth.heights
    visited = np.zeros(grid.n_state, dtype=bool)
    policy_rng = np.random.default_rng([seed, 0])
    start = state.t
    snapshots = set(config.episode.snapshots(start))
    previous_trace = state.trace

    for t in range(start + 1, start + config.episode.taps + 1):
        try:
            started = time.perf_counter()
            if t == 1:
                motion = MotionParams()
            else:
                maps = decision_maps(
                    state, grid, transition_rate,
                    gradient_scale=config.sensor.gradient_scale,
                )
                motion = select_action(maps, actions, grid, policy, policy_rng, workers)
            scoring_ms = (time.perf_counter() - started) * 1e3

            clip = build_clip_matrix(grid, motion, config.sensor.beta_c, config.sensor.sparse_clip)
            frame = execute_tap(
                truth,
                TapCommand(motion=motion, noise=config.simulator.noise),
                sim_sensor,
                grid,
                rng=np.random.default_rng([seed, 1, t]),
                t=t,
                clip=clip,
            )

            started = time.perf_counter()
            state = update_tap(state, frame, sensor, clip=clip)
            update_ms = (time.perf_counter() - started) * 1e3

            visited[footprint_cells(grid, motion)] = True
            mean_image = to_image(state.mean, side)
            if grid.hr_taxels >= SSIM_WINDOW:
                patch_truth = to_image(clip.apply(truth.vector), grid.hr_taxels)
                patch_pred = to_image(predict_hr(state, motion, grid, clip=clip), grid.hr_taxels)
                ssim_patch = ssim(patch_pred, patch_truth)
            else:
                ssim_patch = float("nan")

            found = _covariance_checks(
                state, previous_trace, t, config.episode.check_eigenvalues
            )
            if found:
                log_warning("Covariance sanity check failed", extra={"tap": t, "problems": found})
                result.violations.extend(found)
            previous_trace = state.trace

            record = TapRecord(
                t=t,
                x=motion.x,
                y=motion.y,
                theta=motion.theta,
                ssim_state=ssim(mean_image, truth_image),
                ssim_patch=ssim_patch,
                mse=mse(mean_image, truth_image),
                mse_visited=mse_visited(mean_image, truth_image, to_image(visited, side)),
                trace=state.trace,
                update_ms=update_ms,
                scoring_ms=scoring_ms,
            )
            result.log.append(record)
            result.actions.append(motion)

            if t in snapshots:
                result.snapshots[t] = mean_image.copy()
                maps = decision_maps(
                    state, grid, transition_rate,
                    gradient_scale=config.sensor.gradient_scale,
                )
                result.decision_snapshots[t] = to_image(maps.decision, side).copy()

            log_info(
                "Tap complete",
                extra={
                    "tap": t,
                    "pose": (round(motion.x, 6), round(motion.y, 6), round(motion.theta, 6)),
                    "update_ms": round(update_ms, 3),
                    "scoring_ms": round(scoring_ms, 3),
                    "ssim_state": round(record.ssim_state, 6),
                },
            )
        except Exception as e:
            log_error(
                "Episode aborted",
                extra={"surface": surface, "policy": policy, "seed": seed, "tap": t, "error": str(e)},
            )
            raise EpisodeError(str(e), t) from e

    result.state = state
    return result
