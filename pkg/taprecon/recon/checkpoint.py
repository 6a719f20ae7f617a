"""
Binary checkpoints of a reconstruction session.

Layout, all little-endian:

    8 bytes   magic b"TAPRCKP1"
    4 x int64 sensor_taxels, hr_taxels, state cells n, tap counter t
    5 x f64   scale, sensor_side, amplitude, length_scale (NaN if unset), prior mean
    n x f64   mean
    n*n x f64 covariance, row-major
"""

import math
from pathlib import Path
from typing import Tuple

import numpy as np

from taprecon.core.errors import DimensionError
from taprecon.geometry.grid import GridSpec
from taprecon.recon.state import PriorConfig, StateEstimate

MAGIC = b"TAPRCKP1"
_INTS = np.dtype("<i8")
_FLOATS = np.dtype("<f8")
_HEADER_SIZE = len(MAGIC) + 4 * _INTS.itemsize + 5 * _FLOATS.itemsize


def checkpoint_bytes(state: StateEstimate, grid: GridSpec, prior: PriorConfig) -> bytes:
    n = grid.n_state
    if state.mean.shape != (n,) or state.cov.shape != (n, n):
        raise DimensionError("state does not match the grid it is checkpointed with")
    ints = np.array([grid.sensor_taxels, grid.hr_taxels, n, state.t], dtype=_INTS)
    floats = np.array(
        [
            grid.scale,
            grid.sensor_side,
            prior.amplitude,
            math.nan if prior.length_scale is None else prior.length_scale,
            prior.mean,
        ],
        dtype=_FLOATS,
    )
    return b"".join(
        [
            MAGIC,
            ints.tobytes(),
            floats.tobytes(),
            state.mean.astype(_FLOATS).tobytes(),
            np.ascontiguousarray(state.cov, dtype=_FLOATS).tobytes(),
        ]
    )


def restore_checkpoint(data: bytes) -> Tuple[GridSpec, PriorConfig, StateEstimate]:
    if data[: len(MAGIC)] != MAGIC:
        raise DimensionError("not a checkpoint record")
    offset = len(MAGIC)
    sensor_taxels, hr_taxels, n, t = np.frombuffer(data, _INTS, 4, offset).tolist()
    offset += 4 * _INTS.itemsize
    scale, sensor_side, amplitude, length_scale, mean = np.frombuffer(
        data, _FLOATS, 5, offset
    ).tolist()
    offset += 5 * _FLOATS.itemsize

    expected = _HEADER_SIZE + (n + n * n) * _FLOATS.itemsize
    if len(data) != expected:
        raise DimensionError(f"checkpoint holds {len(data)} bytes, expected {expected}")

    grid = GridSpec(
        sensor_taxels=sensor_taxels, hr_taxels=hr_taxels, scale=scale, sensor_side=sensor_side
    )
    if grid.n_state != n:
        raise DimensionError("checkpoint header is inconsistent")
    prior = PriorConfig(
        amplitude=amplitude,
        length_scale=None if math.isnan(length_scale) else length_scale,
        mean=mean,
    )
    state_mean = np.frombuffer(data, _FLOATS, n, offset).astype(np.float64)
    offset += n * _FLOATS.itemsize
    cov = np.frombuffer(data, _FLOATS, n * n, offset).astype(np.float64).reshape(n, n)
    return grid, prior, StateEstimate(mean=state_mean, cov=cov, t=t)


def save_checkpoint(
    path: Path, state: StateEstimate, grid: GridSpec, prior: PriorConfig
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(checkpoint_bytes(state, grid, prior))
    return path


def load_checkpoint(path: Path) -> Tuple[GridSpec, PriorConfig, StateEstimate]:
    return restore_checkpoint(Path(path).read_bytes())
