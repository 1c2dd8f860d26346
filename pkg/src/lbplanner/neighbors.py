"""Connection radius and radius nearest-neighbour queries on a fixed point set."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .cspace import InvalidInputError

DEFAULT_ETA = 0.01


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d, ``pi^(d/2) / Gamma(d/2 + 1)``."""
    if d < 1:
        raise InvalidInputError("dimension must be >= 1")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


@dataclass(frozen=True)
class RadiusParams:
    mu: float
    dimension: int
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        if self.eta < 0:
            raise InvalidInputError("eta must be >= 0")
        if not self.mu > 0:
            raise InvalidInputError("mu must be > 0")
        if self.dimension < 1:
            raise InvalidInputError("dimension must be >= 1")


def connection_radius(n: int, params: RadiusParams) -> float:
    """FMT* connection radius for ``n`` nodes (natural logarithm)."""
    if n < 2:
        raise InvalidInputError("connection radius needs n >= 2")
    d = params.dimension
    inv_d = 1.0 / d
    return (
        (1.0 + params.eta)
        * 2.0
        * inv_d**inv_d
        * (params.mu / unit_ball_volume(d)) ** inv_d
        * (math.log(n) / n) ** inv_d
    )


def _dist(diff: np.ndarray) -> np.ndarray:
    # single formula for every edge cost so (i, j) and (j, i) agree bitwise
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


class NeighborTable:
    """Disk graph ``G(V, r)`` over a fixed point set.

    Each node's neighbour list (pairs at distance strictly below ``radius``,
    sorted by index, with Euclidean edge costs) is materialised on first use
    and cached. Every materialisation is one NN call on the attached counters;
    :func:`build_neighbor_table` materialises all lists up front.
    """

    def __init__(self, points: Sequence[Sequence[float]], radius: float, counters=None):
        if not radius > 0:
            raise InvalidInputError("radius must be > 0")
        dims = {len(p) for p in points}
        if len(dims) > 1:
            raise InvalidInputError(f"points have mixed dimensions {sorted(dims)}")
        self.points = np.asarray(points, dtype=float).reshape(len(points), -1)
        self.radius = float(radius)
        self.counters = counters
        self._tree = cKDTree(self.points) if len(self.points) else None
        self._adj: list[tuple[list[int], list[float]] | None] = [None] * len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def is_materialized(self, i: int) -> bool:
        return self._adj[i] is not None

    @property
    def materialized_count(self) -> int:
        return sum(a is not None for a in self._adj)

    def neighbors(self, i: int) -> tuple[list[int], list[float]]:
        """Return ``(indices, costs)`` of the nodes within ``radius`` of node ``i``."""
        adj = self._adj[i]
        if adj is None:
            if self.counters is not None:
                self.counters.record_nn()
            p = self.points[i]
            # pad the query, then apply the strict test on our own distances
            cand = self._tree.query_ball_point(p, self.radius * (1 + 1e-9) + 1e-12)
            cand = np.sort(np.asarray(cand, dtype=np.intp))
            dist = _dist(self.points[cand] - p)
            keep = (dist < self.radius) & (cand != i)
            adj = (cand[keep].tolist(), dist[keep].tolist())
            self._adj[i] = adj
        return adj

    def adjacency(self) -> list[tuple[list[int], list[float]]]:
        return [self.neighbors(i) for i in range(len(self))]

    def cost(self, i: int, j: int) -> float:
        return float(_dist(self.points[j][None, :] - self.points[i])[0])


def build_neighbor_table(points: Sequence[Sequence[float]], radius: float,
                         counters=None) -> NeighborTable:
    table = NeighborTable(points, radius, counters)
    table.adjacency()
    return table
