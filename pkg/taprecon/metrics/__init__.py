"""Reconstruction quality metrics and episode logs."""

from .episode_log import (
    EpisodeLog,
    EpisodeMetadata,
    TapRecord,
    read_episode_log,
    timing_path,
)
from .quality import (
    SSIM_PARAMETERS,
    mse,
    mse_visited,
    psnr,
    ssim,
    taps_to_threshold,
)

__all__ = [
    "EpisodeLog",
    "EpisodeMetadata",
    "SSIM_PARAMETERS",
    "TapRecord",
    "mse",
    "mse_visited",
    "psnr",
    "read_episode_log",
    "ssim",
    "taps_to_threshold",
    "timing_path",
]
