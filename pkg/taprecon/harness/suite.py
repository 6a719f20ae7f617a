"""
Batch runs over surfaces x policies x seeds, and their artifacts.

Layout under the output directory:

    config.yaml
    episodes/<surface>/<policy>/seed-<s>.csv (+ .json, _timing.csv)
    episodes/<surface>/<policy>/seed-<s>/truth.png, mean_tNN.png, decision_tNN.png

When ``episode.sensor_axes`` sweeps filter axis sets, the policy folder
carries the set as a suffix, e.g. ``active-z`` and ``active-xyz``.
    summary.csv
    policy_comparison.csv
"""

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd
from scipy.stats import ttest_rel
from tqdm import tqdm

from taprecon.core.errors import TapReconError
from taprecon.core.logging import log_error, log_info
from taprecon.harness.config import ExperimentConfig, save_config
from taprecon.harness.episode import EpisodeResult, run_episode
from taprecon.harness.images import write_image
from taprecon.metrics.quality import taps_to_threshold

SSIM_THRESHOLD = 0.7
COMPARISONS: Tuple[Tuple[str, str], ...] = (
    ("active", "random"),
    ("active", "pure_uncertainty"),
)


@dataclass(frozen=True)
class EpisodeJob:
    surface: str
    policy: str
    seed: int
    axes: Tuple[str, ...] | None = None

    @property
    def folder(self) -> str:
        if self.axes is None:
            return self.policy
        return f"{self.policy}-{axes_label(self.axes)}"


def axes_label(axes: Tuple[str, ...]) -> str:
    return "".join(axes)


@dataclass
class SuiteResult:
    summary: pd.DataFrame
    comparison: pd.DataFrame
    outcomes: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[Tuple[EpisodeJob, str]] = field(default_factory=list)


def episode_path(output_dir: Path, job: EpisodeJob) -> Path:
    return Path(output_dir) / "episodes" / job.surface / job.folder / f"seed-{job.seed}.csv"


def write_episode(result: EpisodeResult, csv_path: Path) -> Path:
    """Write the log plus truth, reconstruction and decision-map snapshots."""
    result.log.write(csv_path)
    image_dir = csv_path.with_suffix("")
    write_image(image_dir / "truth.png", result.truth.heights)
    for t, image in sorted(result.snapshots.items()):
        write_image(image_dir / f"mean_t{t:02d}.png", image)
    for t, image in sorted(result.decision_snapshots.items()):
        write_image(image_dir / f"decision_t{t:02d}.png", stretch(image))
    return csv_path


def stretch(image: np.ndarray) -> np.ndarray:
    """Min-max scale to [0, 1]; decision maps can be negative once variances are small."""
    low, high = float(image.min()), float(image.max())
    if high - low <= 0.0:
        return np.zeros_like(image)
    return (image - low) / (high - low)


def episode_outcome(result: EpisodeResult, taps: int) -> Dict[str, Any]:
    """Final scores of one episode; an unreached threshold counts as ``taps + 1``."""
    series = result.log.column("ssim_state")
    reached = taps_to_threshold(series, SSIM_THRESHOLD)
    metadata = result.log.metadata
    return {
        "surface": metadata.surface_id,
        "policy": metadata.policy,
        "axes": axes_label(metadata.axes),
        "seed": metadata.seed,
        "ssim_state": series[-1],
        "ssim_patch": result.log.column("ssim_patch")[-1],
        "taps_to_threshold": taps + 1 if reached is None else reached,
        "reached": reached is not None,
        "violations": len(result.violations),
    }


def _run_job(
    config: ExperimentConfig, job: EpisodeJob, output_dir: Path, workers: int
) -> Dict[str, Any]:
    if job.axes is not None:
        config = config.with_axes(job.axes)
    result = run_episode(config, job.surface, job.policy, job.seed, workers=workers)
    write_episode(result, episode_path(output_dir, job))
    return episode_outcome(result, config.episode.taps)


def summarize(outcomes: List[Dict[str, Any]]) -> pd.DataFrame:
    """Mean and std per surface x policy x filter axes of the final scores."""
    columns = ["ssim_state", "ssim_patch", "taps_to_threshold"]
    if not outcomes:
        return pd.DataFrame(columns=["surface", "policy", "axes", "episodes", "reached"])
    frame = pd.DataFrame(outcomes)
    grouped = frame.groupby(["surface", "policy", "axes"], sort=True)
    summary = grouped[columns].agg(["mean", "std"])
    summary.columns = [f"{name}_{stat}" for name, stat in summary.columns]
    summary.insert(0, "episodes", grouped.size())
    summary.insert(1, "reached", grouped["reached"].sum())
    return summary.reset_index()


def compare_policies(outcomes: List[Dict[str, Any]]) -> pd.DataFrame:
    """
    Paired t-tests of active against each baseline over shared seeds.

    One row per surface and comparison, plus pooled rows with surface "all".
    Pairs are (surface, axes, seed), so the pooled test stays paired.
    """
    rows = []
    if not outcomes:
        return pd.DataFrame(rows)
    frame = pd.DataFrame(outcomes)
    scopes = [(surface, frame[frame.surface == surface]) for surface in sorted(frame.surface.unique())]
    scopes.append(("all", frame))
    for scope, subset in scopes:
        for policy, baseline in COMPARISONS:
            for metric in ("taps_to_threshold", "ssim_state"):
                pivot = subset.pivot_table(
                    index=["surface", "axes", "seed"], columns="policy", values=metric
                )
                if policy not in pivot or baseline not in pivot:
                    continue
                paired = pivot[[policy, baseline]].dropna()
                a = paired[policy].to_numpy(dtype=np.float64)
                b = paired[baseline].to_numpy(dtype=np.float64)
                statistic, pvalue = math.nan, math.nan
                if len(paired) >= 2 and np.any(a != b):
                    test = ttest_rel(a, b)
                    statistic, pvalue = float(test.statistic), float(test.pvalue)
                rows.append(
                    {
                        "surface": scope,
                        "policy": policy,
                        "baseline": baseline,
                        "metric": metric,
                        "pairs": len(paired),
                        "policy_mean": float(a.mean()) if len(a) else math.nan,
                        "baseline_mean": float(b.mean()) if len(b) else math.nan,
                        "statistic": statistic,
                        "pvalue": pvalue,
                    }
                )
    return pd.DataFrame(rows)


def run_suite(
    config: ExperimentConfig,
    output_dir: Path | None = None,
    workers: int = 1,
    scoring_workers: int | None = None,
    progress: bool = True,
) -> SuiteResult:
    """
    Run every surface x policy x seed episode and write the artifacts.

    Failed episodes are logged and skipped; they are reported in
    ``SuiteResult.failures``. Summary rows follow job order, not completion
    order, so the output is the same for any number of workers.

    Args:
        config: Validated experiment config
        output_dir: Defaults to ``config.output_dir``
        workers: Processes; 1 runs episodes inline
        scoring_workers: Threads per episode for action scoring
        progress: Show a tqdm progress bar

    Returns:
        SuiteResult: Summary tables, per-episode outcomes and failures
    """
    output_dir = Path(output_dir or config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    save_config(config, output_dir / "config.yaml")

    sweep = [None] if not config.episode.sensor_axes else config.axis_variants()
    jobs = [
        EpisodeJob(surface, policy, seed, axes)
        for surface in config.surface_ids
        for policy in config.episode.policies
        for axes in sweep
        for seed in config.episode.seeds
    ]
    log_info(
        "Starting suite",
        extra={"episodes": len(jobs), "workers": workers, "output_dir": str(output_dir)},
    )

    outcomes: Dict[EpisodeJob, Dict[str, Any]] = {}
    failures: List[Tuple[EpisodeJob, str]] = []
    threads = scoring_workers or 1

    def record_failure(job: EpisodeJob, error: Exception) -> None:
        log_error(
            "Episode failed; skipping",
            extra={"surface": job.surface, "policy": job.policy, "seed": job.seed, "error": str(error)},
        )
        failures.append((job, str(error)))

    with tqdm(total=len(jobs), desc="episodes", unit="ep", disable=not progress) as bar:
        if workers <= 1:
            for job in jobs:
                try:
                    outcomes[job] = _run_job(config, job, output_dir, threads)
                except (TapReconError, OSError) as e:
                    record_failure(job, e)
                bar.update()
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {
                    pool.submit(_run_job, config, job, output_dir, threads): job for job in jobs
                }
                for future in as_completed(futures):
                    job = futures[future]
                    try:
                        outcomes[job] = future.result()
                    except Exception as e:
                        record_failure(job, e)
                    bar.update()

    ordered = [outcomes[job] for job in jobs if job in outcomes]
    summary = summarize(ordered)
    comparison = compare_policies(ordered)
    summary.to_csv(output_dir / "summary.csv", index=False, lineterminator="\r\n", float_format="%.12g")
    comparison.to_csv(
        output_dir / "policy_comparison.csv", index=False, lineterminator="\r\n", float_format="%.12g"
    )
    log_info(
        "Suite finished",
        extra={"completed": len(ordered), "failed": len(failures)},
    )
    failures.sort(key=lambda item: jobs.index(item[0]))
    return SuiteResult(summary=summary, comparison=comparison, outcomes=ordered, failures=failures)
