import math

import numpy as np
import pytest

from taprecon.explorer.maps import decision_maps
from taprecon.explorer.policy import best_index, footprint_scores, select_action
from taprecon.geometry.motion import ActionSpace, MotionParams
from taprecon.sensor.clip import build_clip_matrix


@pytest.fixture
def aligned_actions(small_grid):
    return ActionSpace.build(small_grid, 1.0, math.pi / 2)


def test_scores_match_explicit_clip_sums(small_grid, aligned_actions, rng):
    score_map = rng.uniform(0.1, 2.0, size=small_grid.n_state)
    scores = footprint_scores(score_map, aligned_actions, small_grid)
    assert scores.shape == (len(aligned_actions),)
    for index in rng.choice(len(aligned_actions), size=20, replace=False):
        clip = build_clip_matrix(small_grid, aligned_actions[int(index)])
        explicit = float((clip.matrix @ score_map).sum())
        assert scores[index] == pytest.approx(explicit, rel=1e-6)


def test_slices_and_gather_agree(small_grid, rng):
    actions = ActionSpace.build(small_grid, 1.0, math.radians(7.0))
    score_map = rng.normal(size=small_grid.n_state)
    slices = footprint_scores(score_map, actions, small_grid, method="slices")
    gather = footprint_scores(score_map, actions, small_grid, method="gather")
    np.testing.assert_allclose(slices, gather, rtol=1e-12, atol=1e-12)


def test_fractional_step_uses_gather(small_grid, rng):
    actions = ActionSpace.build(small_grid, 1.5, None)
    score_map = rng.uniform(size=small_grid.n_state)
    auto = footprint_scores(score_map, actions, small_grid)
    np.testing.assert_allclose(auto, footprint_scores(score_map, actions, small_grid, method="gather"))
    with pytest.raises(ValueError):
        footprint_scores(score_map, actions, small_grid, method="slices")


def test_scores_do_not_depend_on_workers(small_grid, rng):
    actions = ActionSpace.build(small_grid, 2.0, math.radians(30.0))
    score_map = rng.uniform(size=small_grid.n_state)
    np.testing.assert_array_equal(
        footprint_scores(score_map, actions, small_grid, workers=4),
        footprint_scores(score_map, actions, small_grid),
    )


def test_positive_scaling_keeps_best_action(small_grid, aligned_actions, rng):
    for _ in range(100):
        score_map = rng.uniform(size=small_grid.n_state)
        scale = rng.uniform(0.01, 100.0)
        a = best_index(footprint_scores(score_map, aligned_actions, small_grid))
        b = best_index(footprint_scores(scale * score_map, aligned_actions, small_grid))
        assert a == b


def test_ties_go_to_lowest_index():
    assert best_index(np.array([1.0, 3.0, 2.0, 3.0])) == 1
    assert best_index(np.array([5.0, 5.0 * (1 + 1e-14), 4.0])) == 0
    assert best_index(np.array([5.0, 5.0 * (1 + 1e-9), 4.0])) == 1


def test_uniform_map_ties_everywhere(small_grid, aligned_actions):
    # All poses cover the same number of cells, so every score ties.
    scores = footprint_scores(np.ones(small_grid.n_state), aligned_actions, small_grid)
    np.testing.assert_allclose(scores, small_grid.n_hr)
    assert best_index(scores) == 0


def test_active_policy_targets_uncertain_corner(small_grid, small_state, aligned_actions):
    # Pin the variance everywhere except the top-right corner.
    cov = np.array(small_state.cov) * 1e-4
    image = np.zeros((24, 24), dtype=bool)
    image[18:, 18:] = True
    corner = image.ravel()
    cov[np.ix_(corner, corner)] = np.array(small_state.cov)[np.ix_(corner, corner)]
    small_state.cov = cov
    maps = decision_maps(small_state, small_grid, t=0)
    motion = select_action(maps, aligned_actions, small_grid, "pure_uncertainty")
    assert motion.x > 0 and motion.y > 0


def test_random_policy_is_seeded(small_grid, small_state, aligned_actions):
    maps = decision_maps(small_state, small_grid)
    a = select_action(maps, aligned_actions, small_grid, "random", rng=np.random.default_rng(5))
    b = select_action(maps, aligned_actions, small_grid, "random", rng=np.random.default_rng(5))
    assert a == b
    assert isinstance(a, MotionParams)


def test_unknown_policy_raises(small_grid, small_state, aligned_actions):
    maps = decision_maps(small_state, small_grid)
    with pytest.raises(ValueError):
        select_action(maps, aligned_actions, small_grid, "greedy")
