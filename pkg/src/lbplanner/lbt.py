"""LBT-FMT*: grow a lower-bound tree and a verified approximation tree together."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from .anytime import EdgeCache, SampleSequence, extend_samples, iteration_sizes
from .cspace import InvalidInputError, Scenario
from .instrument import CallCounters, RunRecord
from .neighbors import NeighborTable, RadiusParams, build_neighbor_table, connection_radius
from .search import CLOSED, OPEN, UNVISITED, PathResult, SearchTree, check_edge, goal_mask

INF = math.inf
TOL = 1e-9


@dataclass
class DualTree:
    """Lower-bound tree ``lb`` and approximation tree ``apx`` over one node set.

    Both trees always contain the same nodes. ``lb`` may use edges that were
    never collision-checked; every ``apx`` edge is known to be free.
    """

    lb: SearchTree
    apx: SearchTree
    epsilon: float
    shortcut_insertions: int = 0
    checked_insertions: int = 0
    verified: set[tuple[int, int]] = field(default_factory=set, repr=False)


def lbt_fmt(scenario: Scenario, points: Sequence[Sequence[float]], table: NeighborTable,
            epsilon: float = 0.0, cache: EdgeCache | None = None,
            counters: CallCounters | None = None,
            goal: Sequence[bool] | None = None) -> tuple[PathResult, DualTree]:
    """FMT*-style search that skips collision checks when a cached-free edge
    already gives a cost within ``1 + epsilon`` of the lower bound.

    The open set is ordered by lower-bound cost. The returned path is read
    from the approximation tree.
    """
    if epsilon < 0:
        raise InvalidInputError("epsilon must be >= 0")
    n = len(points)
    if n == 0 or tuple(map(float, points[0])) != tuple(scenario.x_init):
        raise InvalidInputError("x_init must be stored at index 0")
    if len(table) != n:
        raise InvalidInputError("neighbour table does not match the point set")
    goal = goal_mask(scenario, points) if goal is None else goal
    cache = EdgeCache() if cache is None else cache

    lb, apx = SearchTree.empty(n), SearchTree.empty(n)
    dual = DualTree(lb, apx, epsilon)
    state = lb.state
    factor = 1.0 + epsilon
    heap = [(0.0, 0)]
    z = 0
    while not goal[z]:
        lb.expansions.append(z)
        h_new = []
        nbrs_z, _ = table.neighbors(z)
        for x in nbrs_z:
            if state[x] != UNVISITED:
                continue
            nbrs_x, costs_x = table.neighbors(x)
            y_lb, best_lb, c_lb = -1, INF, INF
            y_apx, best_apx = -1, INF
            for y, c in zip(nbrs_x, costs_x):
                if state[y] != OPEN:
                    continue
                v = lb.cost[y] + c
                if v < best_lb:
                    y_lb, best_lb, c_lb = y, v, c
                if cache.is_known_free(y, x):
                    v = apx.cost[y] + c
                    if v < best_apx:
                        y_apx, best_apx = y, v
            if y_lb < 0:
                continue
            if y_apx >= 0 and best_apx <= factor * best_lb:
                lb.parent[x], lb.cost[x] = y_lb, best_lb
                apx.parent[x], apx.cost[x] = y_apx, best_apx
                dual.shortcut_insertions += 1
                h_new.append(x)
            elif check_edge(scenario, points, y_lb, x, cache, counters):
                lb.parent[x], lb.cost[x] = y_lb, best_lb
                apx.parent[x], apx.cost[x] = y_lb, apx.cost[y_lb] + c_lb
                dual.checked_insertions += 1
                dual.verified.add((y_lb, x))
                h_new.append(x)
        for x in h_new:
            state[x] = OPEN
            heapq.heappush(heap, (lb.cost[x], x))
        state[z] = CLOSED
        while heap and state[heap[0][1]] != OPEN:
            heapq.heappop(heap)
        if not heap:
            _sync(dual)
            return PathResult.failure("exhausted"), dual
        z = heap[0][1]

    _sync(dual)
    return PathResult("path", apx.path_to(z), apx.cost[z]), dual


def _sync(dual: DualTree) -> None:
    dual.apx.state[:] = dual.lb.state
    dual.apx.expansions = list(dual.lb.expansions)


def check_dual_invariants(dual: DualTree, fmt_oracle_costs: Sequence[float],
                          epsilon: float | None = None) -> list[str]:
    """List per-node violations of the approximation and lower-bound invariants.

    ``fmt_oracle_costs`` are the costs an FMT* run on the same node set and
    radius assigns (``inf`` for nodes outside its tree).
    """
    eps = dual.epsilon if epsilon is None else epsilon
    lb, apx = dual.lb, dual.apx
    n = len(lb.cost)
    if len(fmt_oracle_costs) != n or len(apx.cost) != n:
        raise InvalidInputError("oracle costs and trees cover different node sets")
    out = []
    for x in range(n):
        in_lb = lb.state[x] != UNVISITED
        if in_lb != (apx.state[x] != UNVISITED):
            out.append(f"node {x}: membership differs between trees")
            continue
        if not in_lb:
            continue
        if apx.cost[x] > (1 + eps) * lb.cost[x] + TOL:
            out.append(f"node {x}: apx cost {apx.cost[x]:.12g} > (1+{eps}) * lb cost {lb.cost[x]:.12g}")
        f = fmt_oracle_costs[x]
        if not math.isinf(f) and lb.cost[x] > f + TOL:
            out.append(f"node {x}: lb cost {lb.cost[x]:.12g} > FMT* cost {f:.12g}")
    return out


def lbt_anytime(scenario: Scenario, n0: int, iterations: int, params: RadiusParams,
                seed: int | None, epsilon: float = 0.0,
                keep_snapshots: bool = False) -> list[RunRecord]:
    """Sample-doubling loop with LBT-FMT* as the search phase and a shared edge cache."""
    seq = SampleSequence.start(scenario, seed)
    cache = EdgeCache()
    records = []
    best, best_path = INF, []
    for it, n_samples in enumerate(iteration_sizes(n0, iterations), start=1):
        t0 = time.perf_counter()
        extend_samples(seq, n_samples, scenario)
        points = seq.points[: n_samples + 2]
        counters = CallCounters()
        table = build_neighbor_table(points, connection_radius(len(points), params), counters)
        result, dual = lbt_fmt(scenario, points, table, epsilon, cache, counters)
        if result.found and result.cost < best:
            best, best_path = result.cost, result.nodes
        records.append(RunRecord(
            planner="lbt_fmt", iteration=it, n=len(points), cost=best,
            wall_time=time.perf_counter() - t0, counters=counters, tree_size=dual.apx.size,
            seed=seed, epsilon=epsilon, iteration_cost=result.cost,
            outcome="path" if result.found else result.reason, path=list(best_path),
            snapshot=(points, dual.apx) if keep_snapshots else None,
        ))
    return records
