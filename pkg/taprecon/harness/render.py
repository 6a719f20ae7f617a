"""
Post-processing of a run directory: image grids and SSIM curve data.
"""

import re
from pathlib import Path
from typing import List

import pandas as pd

from taprecon.core.errors import TapReconError
from taprecon.core.logging import log_info, log_warning
from taprecon.harness.images import compose_grid, read_pixels, save_pixels
from taprecon.metrics.episode_log import read_episode_log

_SNAPSHOT = re.compile(r"^(mean|decision)_t(\d+)\.png$")


def episode_logs(run_dir: Path) -> List[Path]:
    """Episode CSVs under ``run_dir``, in sorted path order."""
    return sorted(
        path
        for path in Path(run_dir).glob("episodes/*/*/seed-*.csv")
        if not path.stem.endswith("_timing")
    )


def render_episode_grid(image_dir: Path, out_path: Path) -> Path | None:
    """
    Compose truth and reconstruction snapshots (top row) over decision maps.

    Returns ``None`` when the episode has no snapshots.
    """
    image_dir = Path(image_dir)
    truth = image_dir / "truth.png"
    if not truth.is_file():
        return None
    snapshots = {"mean": {}, "decision": {}}
    for path in image_dir.iterdir():
        match = _SNAPSHOT.match(path.name)
        if match:
            snapshots[match.group(1)][int(match.group(2))] = path

    top = [read_pixels(truth)] + [read_pixels(p) for _, p in sorted(snapshots["mean"].items())]
    rows = [top]
    if snapshots["decision"]:
        rows.append([read_pixels(p) for _, p in sorted(snapshots["decision"].items())])
    return save_pixels(out_path, compose_grid(rows))


def ssim_curves(run_dir: Path) -> pd.DataFrame:
    """Mean and std of both SSIM scores per surface, policy, filter axes and tap, over seeds."""
    frames = []
    for csv_path in episode_logs(run_dir):
        log = read_episode_log(csv_path)
        frame = log.to_frame()[["t", "ssim_state", "ssim_patch"]]
        frame.insert(0, "axes", "".join(log.metadata.axes))
        frame.insert(0, "policy", log.metadata.policy)
        frame.insert(0, "surface", log.metadata.surface_id)
        frames.append(frame)
    if not frames:
        raise TapReconError(f"no episode logs under {run_dir}")
    combined = pd.concat(frames, ignore_index=True)
    grouped = combined.groupby(["surface", "policy", "axes", "t"], sort=True)
    curves = grouped[["ssim_state", "ssim_patch"]].agg(["mean", "std"])
    curves.columns = [f"{name}_{stat}" for name, stat in curves.columns]
    curves.insert(0, "seeds", grouped.size())
    return curves.reset_index()


def render_run(run_dir: Path) -> List[Path]:
    """
    Write ``grid.png`` next to each episode and ``curves.csv`` at the top.

    Returns:
        List[Path]: Every file written
    """
    run_dir = Path(run_dir)
    written = []
    for csv_path in episode_logs(run_dir):
        image_dir = csv_path.with_suffix("")
        grid = render_episode_grid(image_dir, image_dir / "grid.png")
        if grid is None:
            log_warning("Episode has no snapshots", extra={"episode": str(csv_path)})
        else:
            written.append(grid)

    curves_path = run_dir / "curves.csv"
    ssim_curves(run_dir).to_csv(
        curves_path, index=False, lineterminator="\r\n", float_format="%.12g"
    )
    written.append(curves_path)
    log_info("Rendered run", extra={"run_dir": str(run_dir), "files": len(written)})
    return written
