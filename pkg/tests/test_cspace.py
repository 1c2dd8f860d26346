import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import dense_segment_free, square
from lbplanner.cspace import (
    GoalRegion, InvalidInputError, Obstacle, Scenario, UnsatisfiableScenarioError,
    collision_free, free_mask, free_space_measure, in_goal, is_free, sample_free,
)

coord = st.floats(0.0, 1.0, allow_nan=False)
point = st.tuples(coord, coord)


def mixed_scene():
    return square([Obstacle.box((0.4, 0.4), (0.6, 0.6)), Obstacle.ball((0.2, 0.7), 0.1),
                   Obstacle.box((0.7, 0.1), (0.9, 0.3))])


class TestIsFree:
    def test_empty_square(self, empty_square):
        assert is_free(empty_square, (0.5, 0.5))

    def test_interior_of_box(self, box_square):
        assert not is_free(box_square, (0.5, 0.5))

    def test_box_boundary_is_collision(self, box_square):
        assert not is_free(box_square, (0.4, 0.5))

    def test_outside_bounds(self, empty_square):
        assert not is_free(empty_square, (1.2, 0.5))

    def test_dimension_mismatch(self, empty_square):
        with pytest.raises(InvalidInputError):
            is_free(empty_square, (0.5, 0.5, 0.5))

    def test_free_mask_agrees(self):
        sc = mixed_scene()
        pts = np.random.default_rng(0).random((2000, 2))
        assert free_mask(sc, pts).tolist() == [is_free(sc, p) for p in pts]


class TestSampleFree:
    def test_zero_count(self, box_square):
        assert sample_free(box_square, 0, np.random.default_rng(1)) == []

    def test_seed_reproducible(self, box_square):
        a = sample_free(box_square, 50, np.random.default_rng(42))
        b = sample_free(box_square, 50, np.random.default_rng(42))
        assert a == b

    def test_every_point_free(self, box_square):
        pts = sample_free(box_square, 1000, np.random.default_rng(7))
        assert len(pts) == 1000
        assert all(is_free(box_square, p) for p in pts)

    def test_attempt_cap(self):
        # free space is a thin sliver, so a tiny cap runs out
        sc = Scenario(2, ((0, 0), (1, 1)), (Obstacle.box((0.0, 0.0), (1.0, 0.999)),),
                      (0.5, 0.9995), GoalRegion((0.6, 0.9995)))
        with pytest.raises(UnsatisfiableScenarioError):
            sample_free(sc, 5, np.random.default_rng(0), max_attempts=10)


class TestCollisionFree:
    def test_no_obstacles(self, empty_square):
        assert collision_free(empty_square, (0.1, 0.1), (0.2, 0.1))

    def test_crosses_box(self, box_square):
        assert not collision_free(box_square, (0.3, 0.5), (0.7, 0.5))

    def test_grazing_ball_matches_dense_oracle(self):
        sc = square([Obstacle.ball((0.5, 0.5), 0.1)])
        a, b = (0.3, 0.61), (0.7, 0.61)
        assert collision_free(sc, a, b) == dense_segment_free(sc, a, b)
        assert collision_free(sc, a, b)

    def test_ball_hit(self):
        sc = square([Obstacle.ball((0.5, 0.5), 0.1)])
        assert not collision_free(sc, (0.3, 0.59), (0.7, 0.59))

    def test_sliding_along_box_face_is_collision(self, box_square):
        assert not collision_free(box_square, (0.4, 0.3), (0.4, 0.7))

    def test_counts_lp(self, empty_square):
        from lbplanner.instrument import CallCounters
        c = CallCounters()
        collision_free(empty_square, (0.1, 0.1), (0.2, 0.2), c, (3, 1))
        assert c.lp_calls == 1 and list(c.lp_edges) == [(1, 3)]

    def test_dimension_mismatch(self, empty_square):
        with pytest.raises(InvalidInputError):
            collision_free(empty_square, (0.1, 0.1), (0.2, 0.2, 0.2))

    @settings(max_examples=150, deadline=None)
    @given(point, point)
    def test_free_verdict_implies_dense_free(self, a, b):
        sc = mixed_scene()
        if collision_free(sc, a, b):
            assert dense_segment_free(sc, a, b)

    @settings(max_examples=200, deadline=None)
    @given(point)
    def test_degenerate_segment(self, a):
        sc = mixed_scene()
        assert collision_free(sc, a, a) == is_free(sc, a)

    @settings(max_examples=200, deadline=None)
    @given(point, point)
    def test_symmetric(self, a, b):
        sc = mixed_scene()
        assert collision_free(sc, a, b) == collision_free(sc, b, a)

    def test_3d_box(self):
        sc = square([Obstacle.box((0.4,) * 3, (0.6,) * 3)], x_init=(0.1,) * 3, goal=(0.9,) * 3, dim=3)
        assert not collision_free(sc, (0.1, 0.1, 0.1), (0.9, 0.9, 0.9))
        assert collision_free(sc, (0.1, 0.1, 0.9), (0.9, 0.1, 0.9))


class TestGoal:
    @pytest.mark.parametrize("q,expected", [((1, 1), True), ((0.95, 1), True), ((0.8, 1), False)])
    def test_in_goal(self, q, expected):
        sc = square(x_init=(0.1, 0.1), goal=(1.0, 1.0), goal_radius=0.1)
        assert in_goal(sc, q) is expected


class TestMeasure:
    def test_bounds_square(self, empty_square):
        assert free_space_measure(empty_square) == 1.0

    def test_bounds_cube(self):
        sc = square(x_init=(0.1,) * 3, goal=(0.9,) * 3, dim=3)
        assert free_space_measure(sc) == 1.0

    def test_monte_carlo(self, box_square):
        est = free_space_measure(box_square, "monte_carlo", 10**6, np.random.default_rng(1))
        assert abs(est - (1.0 - 0.04)) <= 0.002

    def test_unknown_mode(self, empty_square):
        with pytest.raises(InvalidInputError):
            free_space_measure(empty_square, "exact")


class TestScenarioValidation:
    def test_start_in_obstacle(self):
        with pytest.raises(InvalidInputError, match="x_init"):
            square([Obstacle.box((0.0, 0.0), (0.2, 0.2))])

    def test_goal_in_obstacle(self):
        with pytest.raises(InvalidInputError, match="goal.center"):
            square([Obstacle.ball((0.95, 0.95), 0.02)])

    def test_bad_box(self):
        with pytest.raises(InvalidInputError):
            Obstacle.box((0.5, 0.5), (0.4, 0.6))

    def test_bad_ball(self):
        with pytest.raises(InvalidInputError):
            Obstacle.ball((0.5, 0.5), 0.0)

    def test_negative_goal_radius(self):
        with pytest.raises(InvalidInputError):
            GoalRegion((0.5, 0.5), -1.0)

    def test_volume(self):
        sc = Scenario(2, ((0, 0), (2, 3)), (), (0.1, 0.1), GoalRegion((1, 1)))
        assert math.isclose(sc.volume, 6.0)
