import numpy as np
import pytest

from lbplanner.cspace import GoalRegion, Obstacle, Scenario, is_free


def square(obstacles=(), x_init=(0.05, 0.05), goal=(0.95, 0.95), goal_radius=0.05, dim=2):
    lo, hi = (0.0,) * dim, (1.0,) * dim
    return Scenario(dim, (lo, hi), tuple(obstacles), x_init, GoalRegion(goal, goal_radius))


def dense_segment_free(scenario, a, b, step=1e-4):
    """Point-sampling oracle along ``ab`` at the given spacing."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    k = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
    return all(is_free(scenario, a + t * (b - a)) for t in np.linspace(0.0, 1.0, k + 1))


@pytest.fixture
def empty_square():
    return square()


@pytest.fixture
def box_square():
    return square([Obstacle.box((0.4, 0.4), (0.6, 0.6))])
