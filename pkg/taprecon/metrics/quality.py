"""
Image-quality metrics for reconstructions.
"""

import math
from typing import Sequence

import numpy as np
from skimage.metrics import structural_similarity

from taprecon.core.errors import DimensionError

SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_DATA_RANGE = 1.0
# Gaussian window of sigma 1.5 truncated at 3.5 sigma.
SSIM_WINDOW = 11

SSIM_PARAMETERS = {
    "window": SSIM_WINDOW,
    "sigma": SSIM_SIGMA,
    "k1": SSIM_K1,
    "k2": SSIM_K2,
    "data_range": SSIM_DATA_RANGE,
}


def _pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare maps of shape {a.shape} and {b.shape}")
    return a, b


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """
    Mean SSIM of two 2-D maps after clamping both to [0, 1].

    Raises:
        DimensionError: On shape mismatch, or maps smaller than the window
    """
    a, b = _pair(a, b)
    if a.ndim != 2:
        raise DimensionError(f"SSIM needs 2-D maps, got {a.ndim}-D")
    if min(a.shape) < SSIM_WINDOW:
        raise DimensionError(
            f"maps of shape {a.shape} are smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} window"
        )
    return float(
        structural_similarity(
            np.clip(a, 0.0, 1.0),
            np.clip(b, 0.0, 1.0),
            data_range=SSIM_DATA_RANGE,
            gaussian_weights=True,
            sigma=SSIM_SIGMA,
            use_sample_covariance=False,
            K1=SSIM_K1,
            K2=SSIM_K2,
        )
    )


def mse(a: np.ndarray, b: np.ndarray) -> float:
    a, b = _pair(a, b)
    return float(np.mean((a - b) ** 2))


def mse_visited(a: np.ndarray, b: np.ndarray, visited: np.ndarray) -> float:
    """MSE over the cells flagged in ``visited``; NaN when nothing was visited."""
    a, b = _pair(a, b)
    visited = np.asarray(visited, dtype=bool)
    if visited.shape != a.shape:
        raise DimensionError(f"mask shape {visited.shape} does not match {a.shape}")
    if not visited.any():
        return math.nan
    return float(np.mean((a[visited] - b[visited]) ** 2))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB for unit dynamic range."""
    error = mse(a, b)
    if error == 0.0:
        return math.inf
    return 10.0 * math.log10(SSIM_DATA_RANGE**2 / error)


def taps_to_threshold(series: Sequence[float], threshold: float = 0.7) -> int | None:
    """1-based tap count at which ``series`` first reaches ``threshold``."""
    for t, value in enumerate(series, start=1):
        if value >= threshold:
            return t
    return None
