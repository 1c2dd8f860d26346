"""Call counting, per-iteration run records and paired-run comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .cspace import InvalidInputError

COST_TOL = 1e-9


def edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class CallCounters:
    """NN and LP accounting for one iteration of one planner.

    ``lp_calls``/``lp_edges`` count genuine local-planner invocations only.
    ``lp_requests`` holds every edge the search asked the local planner about,
    whether it was answered by a real call or by the edge cache.
    """

    nn_calls: int = 0
    lp_calls: int = 0
    cache_hits: int = 0
    lp_edges: dict[tuple[int, int], None] = field(default_factory=dict)
    lp_requests: dict[tuple[int, int], None] = field(default_factory=dict)

    def record_nn(self) -> None:
        self.nn_calls += 1

    def record_lp(self, edge: tuple[int, int] | None = None) -> None:
        self.lp_calls += 1
        if edge is not None:
            self.lp_edges.setdefault(edge_key(*edge), None)

    def record_request(self, edge: tuple[int, int]) -> None:
        self.lp_requests.setdefault(edge_key(*edge), None)

    def record_cache_hit(self) -> None:
        self.cache_hits += 1

    def snapshot(self) -> tuple[int, int]:
        return self.nn_calls, self.lp_calls


@dataclass
class RunRecord:
    """Outcome of one iteration (or one shot) of a planner.

    ``cost`` is the best cost found so far in the run (``inf`` until the first
    path); ``iteration_cost`` is what this iteration's search returned.
    """

    planner: str
    iteration: int
    n: int
    cost: float
    wall_time: float
    counters: CallCounters
    tree_size: int
    seed: int | None = None
    preproc_size: int = 0
    discarded: int = 0
    epsilon: float = 0.0
    iteration_cost: float = math.inf
    outcome: str = ""
    path: list[int] = field(default_factory=list, repr=False)
    preproc_lp_calls: int = 0
    snapshot: Any = field(default=None, repr=False, compare=False)


@dataclass
class IterationComparison:
    iteration: int
    lp_subset: bool
    tree_size_leq: bool
    cost_ok: bool
    cost_a: float
    cost_b: float
    nn_counts: tuple[int, int]
    lp_ratio: float
    nn_ratio: float
    missing_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return self.lp_subset and self.tree_size_leq and self.cost_ok


@dataclass
class ComparisonReport:
    seed: int | None
    epsilon: float
    rows: list[IterationComparison]

    @property
    def all_pass(self) -> bool:
        return all(r.all_pass for r in self.rows)


def _ratio(num: int, den: int) -> float:
    if den == 0:
        return 1.0 if num == 0 else math.inf
    return num / den


def cost_relation(cost_a: float, cost_b: float, epsilon: float) -> bool:
    """``cost_b`` equals ``cost_a`` (epsilon 0) or lies in ``[a, (1+eps) a]``."""
    if math.isinf(cost_a) or math.isinf(cost_b):
        return math.isinf(cost_a) and math.isinf(cost_b)
    if epsilon == 0:
        return abs(cost_b - cost_a) <= COST_TOL
    return cost_a <= cost_b <= (1 + epsilon) * cost_a + COST_TOL


def compare_runs(a: Sequence[RunRecord], b: Sequence[RunRecord], epsilon: float = 0.0) -> ComparisonReport:
    """Check the aFMT*-vs-MPLB relations iteration by iteration.

    ``a`` is the aFMT* run and ``b`` the MPLB-family run on the same seed.
    The LP-subset verdict compares the sets of edges each search submitted to
    the local planner (cache hits included), since that is the set whose
    inclusion the comparison is about.
    """
    if len(a) != len(b):
        raise InvalidInputError(f"runs have {len(a)} and {len(b)} iterations")
    seeds = {r.seed for r in a} | {r.seed for r in b}
    if len(seeds) > 1:
        raise InvalidInputError(f"runs were produced from different seeds {sorted(map(str, seeds))}")
    rows = []
    for ra, rb in zip(a, b):
        if ra.iteration != rb.iteration or ra.n != rb.n:
            raise InvalidInputError(f"iteration mismatch: {ra.iteration}/{ra.n} vs {rb.iteration}/{rb.n}")
        ea, eb = ra.counters.lp_requests, rb.counters.lp_requests
        missing = [e for e in eb if e not in ea]
        rows.append(IterationComparison(
            iteration=ra.iteration,
            lp_subset=not missing,
            tree_size_leq=rb.tree_size <= ra.tree_size,
            cost_ok=cost_relation(ra.cost, rb.cost, epsilon),
            cost_a=ra.cost,
            cost_b=rb.cost,
            nn_counts=(ra.counters.nn_calls, rb.counters.nn_calls),
            lp_ratio=_ratio(rb.counters.lp_calls, ra.counters.lp_calls),
            nn_ratio=_ratio(rb.counters.nn_calls, ra.counters.nn_calls),
            missing_edges=missing,
        ))
    return ComparisonReport(seed=next(iter(seeds)) if seeds else None, epsilon=epsilon, rows=rows)
