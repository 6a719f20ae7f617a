import math

import numpy as np
import pytest

from taprecon.core.errors import DimensionError
from taprecon.metrics.quality import mse, mse_visited, psnr, ssim, taps_to_threshold


def test_self_similarity(rng):
    a = rng.uniform(size=(16, 16))
    assert ssim(a, a) == pytest.approx(1.0)


def test_zeros_against_ones():
    value = ssim(np.zeros((16, 16)), np.ones((16, 16)))
    # Luminance term only: (2*0*1 + C1) / (0 + 1 + C1) with C1 = 1e-4.
    assert value == pytest.approx(1e-4 / (1 + 1e-4), rel=1e-6)
    assert value < 0.01


def test_symmetry(rng):
    a, b = rng.uniform(size=(2, 20, 20))
    assert abs(ssim(a, b) - ssim(b, a)) < 1e-12


def test_values_are_clamped(rng):
    a = rng.uniform(size=(12, 12))
    assert ssim(a + 5.0, np.ones((12, 12))) == pytest.approx(1.0)


def test_ssim_shape_errors(rng):
    with pytest.raises(DimensionError):
        ssim(np.zeros((12, 12)), np.zeros((12, 13)))
    with pytest.raises(DimensionError):
        ssim(np.zeros((8, 8)), np.zeros((8, 8)))


def test_mse_examples(rng):
    a = rng.uniform(size=(10, 10))
    assert mse(a, a) == 0.0
    assert mse(np.zeros((4, 4)), np.ones((4, 4))) == 1.0
    b = rng.uniform(size=(10, 10))
    total = 0.0
    for i in range(10):
        for j in range(10):
            total += (a[i, j] - b[i, j]) ** 2
    assert mse(a, b) == pytest.approx(total / 100, abs=1e-15)
    with pytest.raises(DimensionError):
        mse(a, b[:5])


def test_mse_visited():
    a = np.zeros((3, 3))
    b = np.zeros((3, 3))
    b[0, 0] = 2.0
    mask = np.zeros((3, 3), dtype=bool)
    assert math.isnan(mse_visited(a, b, mask))
    mask[0, :] = True
    assert mse_visited(a, b, mask) == pytest.approx(4.0 / 3.0)


def test_psnr():
    a = np.zeros((4, 4))
    assert psnr(a, a) == math.inf
    assert psnr(a, np.full((4, 4), 0.1)) == pytest.approx(20.0)


def test_taps_to_threshold():
    assert taps_to_threshold([0.1, 0.5, 0.7, 0.9]) == 3
    assert taps_to_threshold([0.1, 0.2], 0.7) is None
    assert taps_to_threshold([0.95], 0.9) == 1


@pytest.mark.parametrize("shift", [-0.2, 0.05, 0.3])
def test_shift_changes_only_the_luminance_term(rng, shift):
    a = rng.uniform(0.3, 0.7, size=(16, 16))
    assert ssim(a + shift, a + shift) == pytest.approx(1.0, abs=1e-9)
    # Shifting only the luminance changes only the luminance term.
    value = ssim(a, a + shift)
    mean = a.mean()
    luminance = (2 * mean * (mean + shift) + 1e-4) / (mean**2 + (mean + shift) ** 2 + 1e-4)
    assert value < 1.0
    assert value == pytest.approx(luminance, abs=0.05)
