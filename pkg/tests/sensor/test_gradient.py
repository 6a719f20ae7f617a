import numpy as np
import pytest
from scipy import ndimage

from taprecon.core.errors import GridError
from taprecon.geometry.grid import GridSpec
from taprecon.sensor.gradient import (
    SOBEL_X,
    SOBEL_Y,
    build_gradient_operators,
    gradient_magnitude,
    sobel_image,
    sobel_matrix,
)


def test_matrix_matches_direct_filtering_on_random_images(rng):
    side = 9
    gx = sobel_matrix(side, SOBEL_X)
    gy = sobel_matrix(side, SOBEL_Y)
    for _ in range(100):
        image = rng.normal(size=(side, side))
        np.testing.assert_allclose(
            (gx @ image.ravel()).reshape(side, side),
            ndimage.correlate(image, SOBEL_X, mode="nearest"),
            atol=1e-12,
        )
        np.testing.assert_allclose(
            (gy @ image.ravel()).reshape(side, side),
            ndimage.sobel(image, axis=0, mode="nearest"),
            atol=1e-12,
        )


def test_matrix_matches_image_filter(rng):
    image = rng.uniform(size=(7, 7))
    gx = sobel_matrix(7, SOBEL_X)
    np.testing.assert_allclose(
        (gx @ image.ravel()).reshape(7, 7), sobel_image(image, "x"), atol=1e-12
    )


def test_constant_image_has_zero_gradient():
    ops = build_gradient_operators(GridSpec(sensor_taxels=2, hr_taxels=5, scale=1.0))
    flat = np.full(25, 0.37)
    np.testing.assert_allclose(ops.gx @ flat, 0.0, atol=1e-12)
    np.testing.assert_allclose(ops.gy @ flat, 0.0, atol=1e-12)


def test_vertical_edge_excites_x_only():
    image = np.zeros((6, 6))
    image[:, 3:] = 1.0
    gx = sobel_image(image, "x")
    gy = sobel_image(image, "y")
    assert np.all(gx[:, 2:4] == 4.0)
    np.testing.assert_allclose(gy, 0.0)


def test_scale_multiplies_operators():
    grid = GridSpec(sensor_taxels=2, hr_taxels=4, scale=1.0)
    raw = build_gradient_operators(grid)
    scaled = build_gradient_operators(grid, 0.125)
    np.testing.assert_allclose(scaled.gx, 0.125 * raw.gx)
    assert scaled.for_axis("y") is scaled.gy
    with pytest.raises(ValueError):
        scaled.for_axis("z")


def test_tiny_grid_is_rejected():
    with pytest.raises(GridError):
        build_gradient_operators(GridSpec(sensor_taxels=2, hr_taxels=2, scale=1.0))


def test_gradient_magnitude_of_ramp():
    image = np.tile(np.arange(5.0), (5, 1))
    np.testing.assert_allclose(gradient_magnitude(image)[2, 2], 8.0)
