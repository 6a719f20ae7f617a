import numpy as np
import pytest
from pydantic import ValidationError

from taprecon.core.errors import DimensionError
from taprecon.geometry.grid import GridSpec
from taprecon.geometry.motion import MotionParams
from taprecon.sensor.clip import build_clip_matrix
from taprecon.sensor.model import SensorConfig, build_sensor_model, composite_matrix, observe


def test_default_config_values():
    config = SensorConfig()
    assert (config.gamma("x"), config.gamma("y"), config.gamma("z")) == (1.0, 1.0, 2.0)
    assert config.sigma("z") == 0.01
    assert config.beta_c == 1e-3
    assert config.axes == ("x", "y", "z")


def test_axes_are_canonicalized():
    assert SensorConfig(axes=("z", "x")).axes == ("x", "z")
    with pytest.raises(ValidationError):
        SensorConfig(axes=())
    with pytest.raises(ValidationError):
        SensorConfig(axes=("z", "z"))


def test_flat_surface_gives_zero_gradients_and_constant_z(noiseless_sensor, small_grid):
    hr = np.full(small_grid.n_hr, 0.6)
    np.testing.assert_allclose(observe(hr, noiseless_sensor, "x"), 0.0, atol=1e-12)
    np.testing.assert_allclose(observe(hr, noiseless_sensor, "y"), 0.0, atol=1e-12)
    z = observe(hr, noiseless_sensor, "z")
    expected = 0.6 * noiseless_sensor.degradation["z"].matrix.sum(axis=1)
    np.testing.assert_allclose(z, expected)


def test_noise_draw_is_seeded(small_sensor, small_grid, rng):
    hr = rng.uniform(size=small_grid.n_hr)
    a = observe(hr, small_sensor, "z", rng=7)
    b = observe(hr, small_sensor, "z", rng=7)
    c = observe(hr, small_sensor, "z", rng=8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    clean = observe(hr, small_sensor, "z", noise=False)
    assert np.abs(a - clean).max() < 0.1


def test_wrong_hr_length_raises(small_sensor):
    with pytest.raises(DimensionError):
        observe(np.zeros(10), small_sensor, "x")


def test_composite_matrix_matches_pipeline(small_sensor, small_grid, rng):
    clip = build_clip_matrix(small_grid, MotionParams(x=1.0, y=-2.0, theta=0.3))
    state = rng.uniform(size=small_grid.n_state)
    for axis in ("x", "y", "z"):
        a = composite_matrix(small_sensor, clip, axis)
        assert a.shape == (small_grid.n_lr, small_grid.n_state)
        np.testing.assert_allclose(
            a @ state, observe(clip.apply(state), small_sensor, axis, noise=False), atol=1e-10
        )


def test_projection_is_degradation_times_gradient(small_sensor):
    np.testing.assert_allclose(
        small_sensor.projection("x"),
        small_sensor.degradation["x"].matrix @ small_sensor.gradients.gx,
    )
    np.testing.assert_array_equal(small_sensor.projection("z"), small_sensor.degradation["z"].matrix)


def test_filter_noise_includes_floor(small_grid):
    sensor = build_sensor_model(small_grid, SensorConfig(sigma_x=0.0, noise_floor=1e-6))
    np.testing.assert_allclose(np.diag(sensor.noise.covariance("x")), 1e-6)
    assert sensor.noise.variance("z") == pytest.approx(1e-4 + 1e-6)


def test_z_only_model_on_tiny_grid_skips_gradients():
    grid = GridSpec(sensor_taxels=2, hr_taxels=2, scale=1.0, sensor_side=2.0)
    sensor = build_sensor_model(grid, SensorConfig(axes=("z",)))
    assert sensor.gradients is None
    with pytest.raises(DimensionError):
        observe(np.zeros(4), sensor, "x")


@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_noise_free_observation_is_linear(noiseless_sensor, small_grid, rng, axis):
    a, b = rng.uniform(size=(2, small_grid.n_hr))
    combined = observe(2.5 * a - 0.75 * b, noiseless_sensor, axis)
    separate = 2.5 * observe(a, noiseless_sensor, axis) - 0.75 * observe(b, noiseless_sensor, axis)
    np.testing.assert_allclose(combined, separate, rtol=0, atol=1e-12)


def test_equal_configs_rebuild_bit_identically(small_grid):
    a = build_sensor_model(small_grid, SensorConfig())
    b = build_sensor_model(small_grid, SensorConfig())
    for axis in ("x", "y", "z"):
        np.testing.assert_array_equal(a.projection(axis), b.projection(axis))
