"""Anytime FMT*: double the sample count each iteration, reusing samples and LP results."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cspace import InvalidInputError, Scenario, sample_free
from .instrument import CallCounters, RunRecord, edge_key
from .neighbors import RadiusParams, build_neighbor_table, connection_radius
from .search import PathResult, get_search, goal_mask

INF = math.inf


class EdgeCache:
    """Local-planner verdicts keyed by unordered node-index pair."""

    def __init__(self):
        self._verdicts: dict[tuple[int, int], bool] = {}

    def get(self, key: tuple[int, int]) -> bool | None:
        return self._verdicts.get(edge_key(*key))

    def put(self, key: tuple[int, int], free: bool) -> None:
        self._verdicts[edge_key(*key)] = bool(free)

    def is_known_free(self, i: int, j: int) -> bool:
        return self._verdicts.get(edge_key(i, j)) is True

    def items(self):
        return self._verdicts.items()

    def __len__(self) -> int:
        return len(self._verdicts)

    def __contains__(self, key) -> bool:
        return edge_key(*key) in self._verdicts


@dataclass
class SampleSequence:
    """Prefix of the fixed random sample stream for one seed.

    Index 0 is ``x_init`` and index 1 the goal centre; sampled configurations
    follow and are never modified once materialised.
    """

    seed: int | None
    points: list[tuple[float, ...]]
    rng: np.random.Generator = field(repr=False)

    @classmethod
    def start(cls, scenario: Scenario, seed: int | None) -> "SampleSequence":
        points = [tuple(scenario.x_init), tuple(scenario.goal.center)]
        return cls(seed, points, np.random.default_rng(seed))

    @property
    def sample_count(self) -> int:
        return len(self.points) - 2

    def __len__(self) -> int:
        return len(self.points)


def extend_samples(seq: SampleSequence, target_size: int, scenario: Scenario) -> SampleSequence:
    """Append free samples until ``seq`` holds ``target_size`` sampled configurations.

    ``target_size`` counts samples only, not the two fixed endpoint nodes.
    """
    if target_size < seq.sample_count:
        raise InvalidInputError("target_size is smaller than the current prefix")
    seq.points.extend(sample_free(scenario, target_size - seq.sample_count, seq.rng))
    return seq


def iteration_sizes(n0: int, iterations: int) -> list[int]:
    if n0 < 1 or iterations < 1:
        raise InvalidInputError("n0 and iterations must be >= 1")
    return [n0 * 2**i for i in range(iterations)]


def afmt(scenario: Scenario, n0: int, iterations: int, params: RadiusParams, seed: int | None,
         cache: EdgeCache | None = None, keep_snapshots: bool = False,
         search_mode: str = "exact") -> list[RunRecord]:
    """Run aFMT* for ``iterations`` doublings starting from ``n0`` samples.

    One :class:`EdgeCache` is shared by all iterations; pass ``cache`` to
    inspect it afterwards. ``search_mode`` selects the per-iteration search
    (see :data:`lbplanner.search.SEARCH_MODES`).
    """
    run_search = get_search(search_mode)
    seq = SampleSequence.start(scenario, seed)
    cache = EdgeCache() if cache is None else cache
    records: list[RunRecord] = []
    best = INF
    best_path: list[int] = []
    for it, n_samples in enumerate(iteration_sizes(n0, iterations), start=1):
        t0 = time.perf_counter()
        extend_samples(seq, n_samples, scenario)
        points = seq.points[: n_samples + 2]
        counters = CallCounters()
        table = build_neighbor_table(points, connection_radius(len(points), params), counters)
        result, tree = run_search(scenario, points, table, cache=cache, counters=counters,
                              goal=goal_mask(scenario, points))
        if result.found and result.cost < best:
            best, best_path = result.cost, result.nodes
        records.append(RunRecord(
            planner="afmt", iteration=it, n=len(points), cost=best,
            wall_time=time.perf_counter() - t0, counters=counters, tree_size=tree.size,
            seed=seed, iteration_cost=result.cost, outcome=_outcome(result), path=list(best_path),
            snapshot=(points, tree) if keep_snapshots else None,
        ))
    return records


def _outcome(result: PathResult) -> str:
    return "path" if result.found else result.reason
