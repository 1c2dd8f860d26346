"""Anytime planning with disk-graph cost-to-go lower bounds (MPLB and its eps-relaxed variant)."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .anytime import EdgeCache, SampleSequence, extend_samples, iteration_sizes
from .cspace import InvalidInputError, Scenario
from .instrument import CallCounters, RunRecord
from .neighbors import NeighborTable, RadiusParams, connection_radius
from .roadmap import bounded_dijkstra
from .search import get_search, goal_mask

INF = math.inf


@dataclass
class LowerBoundField:
    """Per-node cost-to-go lower bounds; ``inf`` outside ``preproc_set``."""

    cost_to_go: list[float]
    preproc_set: set[int]


@dataclass
class MplbParams:
    n0: int
    iterations: int
    radius: RadiusParams
    seed: int | None = None
    epsilon: float = 0.0
    # shrink the radius of the restricted graph to r(|V_preproc|) instead of keeping r(|V|)
    restricted_radius: bool = False
    use_cache: bool = True
    search_mode: str = "exact"

    def __post_init__(self):
        if self.epsilon < 0:
            raise InvalidInputError("epsilon must be >= 0")
        iteration_sizes(self.n0, self.iterations)


def estimate_cost_to_go(scenario: Scenario, points, table: NeighborTable, c: float,
                        counters: CallCounters | None = None, goal=None,
                        restricted_radius: bool = False,
                        radius_params: RadiusParams | None = None) -> LowerBoundField:
    """Collect the nodes within ``c/2`` of the start or of the goal in the disk
    graph, then compute goal distances (up to ``c``) on the graph restricted
    to that set.

    Only neighbour queries are issued here; nothing is collision-checked.
    ``counters`` is accepted for symmetry with the search phase: NN calls are
    charged through the table's own counters.
    """
    goal = goal_mask(scenario, points) if goal is None else goal
    sources = [(i, 0.0) for i, g in enumerate(goal) if g]
    half = c / 2
    from_start = bounded_dijkstra(table, [(0, 0.0)], half)
    from_goal = bounded_dijkstra(table, sources, half)
    preproc = from_start.traversed | from_goal.traversed
    allowed = [False] * len(points)
    for i in preproc:
        allowed[i] = True
    max_edge = None
    if restricted_radius:
        if radius_params is None:
            raise InvalidInputError("restricted_radius needs radius_params")
        max_edge = connection_radius(max(len(preproc), 2), radius_params)
    to_goal = bounded_dijkstra(table, sources, c, allowed=allowed, max_edge=max_edge)
    return LowerBoundField(to_goal.distances, preproc)


def is_promising(cost_to_come: float, cost_to_go: float, c_prev: float) -> bool:
    return cost_to_come + cost_to_go < c_prev


def mplb(scenario: Scenario, params: MplbParams, keep_snapshots: bool = False) -> list[RunRecord]:
    """Run MPLB (``epsilon == 0``) or ANO-MPLB (``epsilon > 0``).

    Each iteration bounds the preprocessing and the search by
    ``c_prev / (1 + epsilon)``. A search stopped by that ceiling keeps the
    previous path and ``c_prev``. ``discarded`` counts the open nodes dropped
    when the ceiling fires.
    """
    eps = params.epsilon
    run_search = get_search(params.search_mode)
    planner = "mplb" if eps == 0 else "ano_mplb"
    seq = SampleSequence.start(scenario, params.seed)
    cache = EdgeCache() if params.use_cache else None
    records: list[RunRecord] = []
    c_prev = INF
    best_path: list[int] = []
    for it, n_samples in enumerate(iteration_sizes(params.n0, params.iterations), start=1):
        t0 = time.perf_counter()
        extend_samples(seq, n_samples, scenario)
        points = seq.points[: n_samples + 2]
        goal = goal_mask(scenario, points)
        counters = CallCounters()
        table = NeighborTable(points, connection_radius(len(points), params.radius), counters)
        budget = c_prev / (1 + eps)

        lp_before = counters.lp_calls
        bound = estimate_cost_to_go(scenario, points, table, budget, counters, goal,
                                    params.restricted_radius, params.radius)
        preproc_lp = counters.lp_calls - lp_before

        result, tree = run_search(scenario, points, table, heuristic=bound.cost_to_go, c_max=budget,
                              cache=cache, counters=counters, goal=goal)
        if result.found:
            c_prev = result.cost
            best_path = result.nodes
        records.append(RunRecord(
            planner=planner, iteration=it, n=len(points), cost=c_prev,
            wall_time=time.perf_counter() - t0, counters=counters, tree_size=tree.size,
            seed=params.seed, preproc_size=len(bound.preproc_set),
            discarded=tree.open_at_exit if result.reason == "ceiling" else 0,
            epsilon=eps, iteration_cost=result.cost,
            outcome="path" if result.found else result.reason, path=list(best_path),
            preproc_lp_calls=preproc_lp,
            snapshot=(points, tree) if keep_snapshots else None,
        ))
    return records
