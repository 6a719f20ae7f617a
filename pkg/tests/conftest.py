"""
Shared fixtures: a small grid that keeps every operator cheap.

The small grid has a 4x4 sensor, a 12x12 HR grid with 1 mm pitch and a
24x24 state region, which is the smallest size that still fits the SSIM
window on both the HR patch and the state map.
"""

import numpy as np
import pytest

from taprecon.geometry.grid import GridSpec
from taprecon.harness.config import ExperimentConfig, parse_config
from taprecon.recon.state import PriorConfig, init_state
from taprecon.sensor.model import SensorConfig, build_sensor_model


@pytest.fixture
def small_grid() -> GridSpec:
    return GridSpec(sensor_taxels=4, hr_taxels=12, scale=2.0, sensor_side=12.0)


@pytest.fixture
def small_sensor(small_grid):
    return build_sensor_model(small_grid, SensorConfig())


@pytest.fixture
def noiseless_sensor(small_grid):
    return build_sensor_model(small_grid, SensorConfig(sigma_x=0.0, sigma_y=0.0, sigma_z=0.0))


@pytest.fixture
def small_state(small_grid):
    return init_state(small_grid, PriorConfig())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def small_config_mapping(tmp_path) -> dict:
    return {
        "grid": {"sensor_taxels": 4, "hr_taxels": 12, "scale": 2.0, "sensor_side": 12.0},
        "explorer": {"x_step": 1.0, "dtheta_deg": 45.0},
        "episode": {"taps": 4, "seeds": [0], "snapshot_taps": [1, 4]},
        "surfaces": [{"kind": "disk", "id": "disk", "radius": 6.0}],
        "output_dir": str(tmp_path / "runs"),
    }


@pytest.fixture
def small_config(small_config_mapping) -> ExperimentConfig:
    return parse_config(small_config_mapping)


def random_spd(rng: np.random.Generator, n: int) -> np.ndarray:
    """Well-conditioned symmetric positive definite matrix."""
    a = rng.normal(size=(n, n))
    return a @ a.T + n * np.eye(n)
