import numpy as np
import pytest

from taprecon.core.errors import DimensionError
from taprecon.geometry.grid import GridSpec, cell_centers
from taprecon.geometry.motion import MotionParams
from taprecon.sensor.clip import build_clip_matrix
from taprecon.sensor.model import SensorConfig, build_sensor_model
from taprecon.simulator.surface import DiskShape, GroundTruthSurface, RectangleShape, load_surface
from taprecon.simulator.tap import TapCommand, execute_tap


def test_flat_surface_noiseless(small_grid, noiseless_sensor):
    surface = GroundTruthSurface(heights=np.full((24, 24), 0.4), side=24.0, source="flat")
    frame = execute_tap(surface, TapCommand(motion=MotionParams()), noiseless_sensor, small_grid)
    np.testing.assert_allclose(frame.ix, 0.0, atol=1e-12)
    np.testing.assert_allclose(frame.iy, 0.0, atol=1e-12)
    np.testing.assert_allclose(frame.iz, frame.iz[0])


def test_repeated_command_is_bit_identical(small_grid, small_sensor):
    surface = load_surface(DiskShape(radius=5.0), small_grid)
    cmd = TapCommand(motion=MotionParams(x=2.0, y=1.0, theta=0.3))
    a = execute_tap(surface, cmd, small_sensor, small_grid, rng=11)
    b = execute_tap(surface, cmd, small_sensor, small_grid, rng=11)
    for axis in ("x", "y", "z"):
        np.testing.assert_array_equal(a.axis(axis), b.axis(axis))
    assert a.motion == cmd.motion


def test_noise_switch(small_grid, small_sensor):
    surface = load_surface(DiskShape(radius=5.0), small_grid)
    quiet = execute_tap(surface, TapCommand(motion=MotionParams(), noise=False), small_sensor, small_grid, rng=1)
    noisy = execute_tap(surface, TapCommand(motion=MotionParams()), small_sensor, small_grid, rng=1)
    assert not np.array_equal(quiet.iz, noisy.iz)
    assert np.abs(quiet.iz - noisy.iz).max() < 0.1


def test_step_edge_matches_brute_force(small_grid, noiseless_sensor):
    surface = load_surface(RectangleShape(cx=6.0, width=12.0, height=24.0), small_grid)
    motion = MotionParams(x=1.0)
    frame = execute_tap(surface, TapCommand(motion=motion), noiseless_sensor, small_grid)

    clip = build_clip_matrix(small_grid, motion)
    c, s = clip.matrix, surface.vector
    hr = np.zeros(small_grid.n_hr)
    for i in range(small_grid.n_hr):
        for j in range(small_grid.n_state):
            hr[i] += c[i, j] * s[j]
    gx = noiseless_sensor.gradients.gx
    grad = np.zeros_like(hr)
    for i in range(small_grid.n_hr):
        for j in range(small_grid.n_hr):
            grad[i] += gx[i, j] * hr[j]
    h = noiseless_sensor.degradation["x"].matrix
    expected = np.zeros(small_grid.n_lr)
    for i in range(small_grid.n_lr):
        for j in range(small_grid.n_hr):
            expected[i] += h[i, j] * grad[j]
    np.testing.assert_allclose(frame.ix, expected, atol=1e-10)

    # The edge at x = 0 lies at sensor x = -1, under the second taxel column.
    columns = np.abs(frame.ix.reshape(4, 4)).sum(axis=0)
    assert int(np.argmax(columns)) == 1
    lr_x = np.unique(cell_centers(small_grid, "lr_sensor")[:, 0])
    assert lr_x[1] == -1.5


def test_simulator_needs_every_axis():
    grid = GridSpec(sensor_taxels=2, hr_taxels=2, scale=1.0, sensor_side=2.0)
    sensor = build_sensor_model(grid, SensorConfig(axes=("z",)))
    surface = GroundTruthSurface(heights=np.zeros((2, 2)), side=2.0, source="flat")
    with pytest.raises(DimensionError):
        execute_tap(surface, TapCommand(motion=MotionParams()), sensor, grid)
