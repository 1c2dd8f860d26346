"""Cost-bounded multi-source Dijkstra over the (unchecked) disk graph."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cspace import InvalidInputError, Scenario, in_goal
from .neighbors import NeighborTable

INF = math.inf


@dataclass
class DijkstraResult:
    distances: list[float]
    traversed: set[int]


def bounded_dijkstra(table: NeighborTable, sources: Iterable[tuple[int, float]],
                     cutoff: float = INF, allowed: Sequence[bool] | None = None,
                     max_edge: float | None = None) -> DijkstraResult:
    """Label-setting shortest paths from several seeded sources.

    A node is settled, and reported as traversed, iff its final label is
    ``<= cutoff``; every other node has distance ``inf``. ``allowed`` restricts
    the graph to a node subset and ``max_edge`` drops edges whose cost is not
    strictly below it. Equal labels are settled in increasing index order.
    Only settled nodes have their neighbour lists queried.
    """
    n = len(table)
    tentative = [INF] * n
    heap: list[tuple[float, int]] = []
    for idx, c0 in sources:
        if not 0 <= idx < n:
            raise InvalidInputError(f"source index {idx} out of range")
        if c0 < 0:
            raise InvalidInputError("initial source costs must be >= 0")
        if allowed is not None and not allowed[idx]:
            continue
        if c0 < tentative[idx]:
            tentative[idx] = c0
            heapq.heappush(heap, (c0, idx))

    dist = [INF] * n
    traversed: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in traversed or d > tentative[u]:
            continue
        if d > cutoff:
            break
        traversed.add(u)
        dist[u] = d
        nbrs, costs = table.neighbors(u)
        for v, c in zip(nbrs, costs):
            if v in traversed:
                continue
            if allowed is not None and not allowed[v]:
                continue
            if max_edge is not None and c >= max_edge:
                continue
            nd = d + c
            if nd < tentative[v]:
                tentative[v] = nd
                heapq.heappush(heap, (nd, v))
    return DijkstraResult(dist, traversed)


def goal_sources(scenario: Scenario, points: Sequence[Sequence[float]]) -> list[tuple[int, float]]:
    """Every point inside the goal region, seeded at cost 0."""
    return [(i, 0.0) for i, p in enumerate(points) if in_goal(scenario, p)]
