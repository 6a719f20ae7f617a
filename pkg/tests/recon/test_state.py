import numpy as np
import pytest

from taprecon.geometry.grid import GridSpec, cell_centers
from taprecon.recon.state import (
    PriorConfig,
    StateEstimate,
    covariance_report,
    init_state,
    prior_covariance,
)


def test_prior_matches_kernel(small_grid):
    prior = PriorConfig(amplitude=0.5, length_scale=2.0)
    cov = prior_covariance(small_grid, prior)
    centers = cell_centers(small_grid, "state")
    i, j = 5, 30
    expected = 0.5 * np.exp(-np.sum((centers[i] - centers[j]) ** 2) / 4.0)
    assert cov[i, j] == pytest.approx(expected)
    assert cov[i, i] == pytest.approx(0.5 * (1 + 1e-8))


def test_prior_is_cached_and_read_only(small_grid):
    a = prior_covariance(small_grid, PriorConfig())
    b = prior_covariance(small_grid, PriorConfig())
    assert a is b
    with pytest.raises(ValueError):
        a[0, 0] = 2.0


def test_default_length_scale_is_one_lr_pitch(small_grid):
    assert PriorConfig().resolved_length_scale(small_grid) == pytest.approx(3.0)
    assert PriorConfig().resolved_length_scale(GridSpec()) == pytest.approx(5.0)


def test_neighbouring_cells_one_length_scale_apart(small_grid):
    # Adjacent state cells on the small grid are 1 mm apart.
    state = init_state(small_grid, PriorConfig(amplitude=1.0, length_scale=1.0))
    assert state.cov[0, 1] == pytest.approx(np.exp(-1.0), abs=1e-12)
    assert state.cov[0, 1] == pytest.approx(0.3679, abs=1e-4)
    np.testing.assert_array_equal(state.mean, 0.0)
    np.testing.assert_allclose(np.diag(state.cov), 1.0 + 1e-8)



def test_init_state_is_writable_copy(small_grid):
    state = init_state(small_grid, PriorConfig(mean=0.25))
    assert state.t == 0
    np.testing.assert_array_equal(state.mean, 0.25)
    state.cov[0, 0] = 3.0
    assert prior_covariance(small_grid, PriorConfig(mean=0.25))[0, 0] != 3.0


def test_covariance_report_flags_problems():
    state = StateEstimate(mean=np.zeros(2), cov=np.array([[1.0, 0.5], [0.4, -1.0]]))
    report = covariance_report(state, eigenvalues=True)
    assert report.asymmetry == pytest.approx(0.1)
    assert report.min_eigenvalue < 0
    assert len(report.violations()) == 2
    clean = covariance_report(StateEstimate(mean=np.zeros(2), cov=np.eye(2)), eigenvalues=True)
    assert clean.violations() == []
    assert clean.trace == pytest.approx(2.0)
