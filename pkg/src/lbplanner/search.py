"""FMT* search with an optional cost-to-go heuristic and cost ceiling."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cspace import InvalidInputError, Scenario, collision_free, in_goal, sample_free
from .instrument import CallCounters, RunRecord, edge_key
from .neighbors import RadiusParams, build_neighbor_table, connection_radius, NeighborTable

INF = math.inf

UNVISITED, OPEN, CLOSED = 0, 1, 2


@dataclass
class SearchTree:
    """Parent links and cost-from-root labels grown by one search."""

    parent: list[int]
    cost: list[float]
    state: list[int]
    root: int = 0
    expansions: list[int] = field(default_factory=list, repr=False)
    open_at_exit: int = 0

    @classmethod
    def empty(cls, n: int, root: int = 0) -> "SearchTree":
        tree = cls([-1] * n, [INF] * n, [UNVISITED] * n, root)
        tree.cost[root] = 0.0
        tree.state[root] = OPEN
        return tree

    @property
    def nodes(self) -> list[int]:
        return [i for i, s in enumerate(self.state) if s != UNVISITED]

    @property
    def size(self) -> int:
        return sum(s != UNVISITED for s in self.state)

    def edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p >= 0]

    def path_to(self, node: int) -> list[int]:
        path = [node]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path[::-1]


@dataclass
class PathResult:
    """Either a root-to-goal path or a failure tagged ``exhausted``/``ceiling``."""

    outcome: str
    nodes: list[int] = field(default_factory=list)
    cost: float = INF
    reason: str | None = None

    @property
    def found(self) -> bool:
        return self.outcome == "path"

    @classmethod
    def failure(cls, reason: str) -> "PathResult":
        return cls("failure", reason=reason)


def goal_mask(scenario: Scenario, points) -> list[bool]:
    return [in_goal(scenario, p) for p in points]


def check_edge(scenario: Scenario, points, y: int, x: int, cache=None,
               counters: CallCounters | None = None) -> bool:
    """One local-planner request for edge ``(y, x)``, answered from the cache when possible."""
    key = edge_key(y, x)
    if counters is not None:
        counters.record_request(key)
    if cache is not None:
        known = cache.get(key)
        if known is not None:
            if counters is not None:
                counters.record_cache_hit()
            return known
    ok = collision_free(scenario, points[y], points[x], counters=counters, edge=key)
    if cache is not None:
        cache.put(key, ok)
    return ok


def search(scenario: Scenario, points: Sequence[Sequence[float]], table: NeighborTable,
           heuristic: Sequence[float] | None = None, c_max: float = INF, cache=None,
           counters: CallCounters | None = None,
           goal: Sequence[bool] | None = None) -> tuple[PathResult, SearchTree]:
    """Grow an FMT* tree from node 0 until a goal node is selected for expansion.

    Open nodes are expanded in order of ``cost + heuristic`` (ties to the
    lower index). For each unvisited neighbour ``x`` of the expanded node, a
    single edge from the open neighbour minimising ``cost(y) + dist(y, x)`` is
    submitted to the local planner. The search fails with ``exhausted`` when
    no open node is left and with ``ceiling`` when the selected node's
    ``cost + heuristic`` reaches ``c_max``.

    Nodes with an infinite heuristic value never join the tree.
    """
    n = len(points)
    if n == 0 or tuple(map(float, points[0])) != tuple(scenario.x_init):
        raise InvalidInputError("x_init must be stored at index 0")
    if len(table) != n:
        raise InvalidInputError("neighbour table does not match the point set")
    h = [0.0] * n if heuristic is None else list(heuristic)
    if len(h) != n:
        raise InvalidInputError("heuristic length does not match the point set")
    goal = goal_mask(scenario, points) if goal is None else goal

    tree = SearchTree.empty(n)
    cost, parent, state = tree.cost, tree.parent, tree.state
    if math.isinf(h[0]):
        return PathResult.failure("exhausted"), tree

    heap = [(h[0], 0)]
    z = 0
    if h[0] >= c_max:
        tree.open_at_exit = 1
        return PathResult.failure("ceiling"), tree
    while not goal[z]:
        tree.expansions.append(z)
        h_new = []
        nbrs_z, _ = table.neighbors(z)
        for x in nbrs_z:
            if state[x] != UNVISITED or h[x] == INF:
                continue
            nbrs_x, costs_x = table.neighbors(x)
            y_min, best = -1, INF
            for y, c in zip(nbrs_x, costs_x):
                if state[y] == OPEN:
                    val = cost[y] + c
                    if val < best:  # neighbours are index-sorted, so ties keep the lower index
                        y_min, best = y, val
            if y_min < 0:
                continue
            if check_edge(scenario, points, y_min, x, cache, counters):
                parent[x] = y_min
                cost[x] = best
                h_new.append(x)
        for x in h_new:
            state[x] = OPEN
            heapq.heappush(heap, (cost[x] + h[x], x))
        state[z] = CLOSED
        while heap and state[heap[0][1]] != OPEN:
            heapq.heappop(heap)
        if not heap:
            return PathResult.failure("exhausted"), tree
        f, z = heap[0]
        if f >= c_max:
            tree.open_at_exit = sum(s == OPEN for s in state)
            return PathResult.failure("ceiling"), tree

    path = tree.path_to(z)
    return PathResult("path", path, cost[z]), tree


def lazy_search(scenario: Scenario, points: Sequence[Sequence[float]], table: NeighborTable,
                heuristic: Sequence[float] | None = None, c_max: float = INF, cache=None,
                counters: CallCounters | None = None,
                goal: Sequence[bool] | None = None) -> tuple[PathResult, SearchTree]:
    """Best-first search over disk-graph edges with deferred collision checks.

    Candidate edges ``(y, x)`` are queued by ``cost(y) + dist(y, x) + h(x)``
    and only checked when popped. A node joins the tree through the first
    popped edge that is free, so every tree cost equals the shortest-path cost
    in the collision-free subgraph (for a consistent ``h``). Termination,
    ceiling and tie-breaking rules match :func:`search`.
    """
    n = len(points)
    if n == 0 or tuple(map(float, points[0])) != tuple(scenario.x_init):
        raise InvalidInputError("x_init must be stored at index 0")
    if len(table) != n:
        raise InvalidInputError("neighbour table does not match the point set")
    h = [0.0] * n if heuristic is None else list(heuristic)
    if len(h) != n:
        raise InvalidInputError("heuristic length does not match the point set")
    goal = goal_mask(scenario, points) if goal is None else goal

    tree = SearchTree.empty(n)
    cost, parent, state = tree.cost, tree.parent, tree.state
    if math.isinf(h[0]):
        return PathResult.failure("exhausted"), tree
    if h[0] >= c_max:
        tree.open_at_exit = 1
        return PathResult.failure("ceiling"), tree

    heap: list[tuple[float, int, int, float]] = []
    x = 0
    state[0] = CLOSED
    while not goal[x]:
        tree.expansions.append(x)
        nbrs, costs = table.neighbors(x)
        gx = cost[x]
        for w, c in zip(nbrs, costs):
            if state[w] == UNVISITED and h[w] != INF:
                heapq.heappush(heap, (gx + c + h[w], w, x, gx + c))
        while True:
            while heap and state[heap[0][1]] != UNVISITED:
                heapq.heappop(heap)
            if not heap:
                return PathResult.failure("exhausted"), tree
            f, w, y, g = heap[0]
            if f >= c_max:
                tree.open_at_exit = len({e[1] for e in heap if state[e[1]] == UNVISITED})
                return PathResult.failure("ceiling"), tree
            heapq.heappop(heap)
            if check_edge(scenario, points, y, w, cache, counters):
                parent[w] = y
                cost[w] = g
                state[w] = CLOSED
                x = w
                break

    path = tree.path_to(x)
    return PathResult("path", path, cost[x]), tree


SEARCH_MODES = {"exact": lazy_search, "fmt": search}


def get_search(mode: str):
    try:
        return SEARCH_MODES[mode]
    except KeyError:
        raise InvalidInputError(f"unknown search mode {mode!r}; choose from {sorted(SEARCH_MODES)}") from None


def node_set(scenario: Scenario, samples: Sequence[Sequence[float]]) -> list[tuple[float, ...]]:
    """``x_init`` at index 0, the goal centre at index 1, then the samples."""
    return [tuple(scenario.x_init), tuple(scenario.goal.center)] + [tuple(s) for s in samples]


def fmt_star(scenario: Scenario, n: int, params: RadiusParams, rng: np.random.Generator,
             search_mode: str = "fmt") -> tuple[PathResult, SearchTree, RunRecord]:
    """One-shot FMT*: ``n`` free samples plus start and goal centre, zero heuristic, no ceiling."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    t0 = time.perf_counter()
    counters = CallCounters()
    points = node_set(scenario, sample_free(scenario, n, rng))
    table = build_neighbor_table(points, connection_radius(len(points), params), counters)
    result, tree = get_search(search_mode)(scenario, points, table, counters=counters)
    record = RunRecord(
        planner="fmt", iteration=1, n=len(points), cost=result.cost,
        wall_time=time.perf_counter() - t0, counters=counters, tree_size=tree.size,
        iteration_cost=result.cost, outcome=result.reason or "path", path=result.nodes,
    )
    record.snapshot = (points, tree)
    return result, tree, record
