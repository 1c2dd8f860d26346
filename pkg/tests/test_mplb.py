import math

import numpy as np
import pytest

from lbplanner.anytime import SampleSequence, afmt, extend_samples
from lbplanner.cspace import GoalRegion, InvalidInputError, Scenario, collision_free
from lbplanner.instrument import CallCounters, compare_runs
from lbplanner.mplb import MplbParams, estimate_cost_to_go, is_promising, mplb
from lbplanner.neighbors import NeighborTable, RadiusParams, build_neighbor_table, connection_radius
from lbplanner.roadmap import bounded_dijkstra, goal_sources
from lbplanner.scenario_io import load_bundled

INF = math.inf
PARAMS = RadiusParams(1.0, 2)


@pytest.fixture(scope="module")
def corridors():
    return load_bundled("corridors")


def chain(extra=()):
    sc = Scenario(2, ((0.0, 0.0), (6.0, 6.0)), (), (0.0, 0.0), GoalRegion((1.0, 0.0), 0.05))
    pts = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), *extra]
    return sc, pts


class TestEstimate:
    def test_chain(self):
        sc, pts = chain()
        lb = estimate_cost_to_go(sc, pts, build_neighbor_table(pts, 0.6), 1.2)
        assert lb.preproc_set == {0, 1, 2}
        assert lb.cost_to_go == [1.0, 0.5, 0.0]

    def test_isolated_node(self):
        sc, pts = chain([(5.0, 5.0)])
        lb = estimate_cost_to_go(sc, pts, build_neighbor_table(pts, 0.6), 1.2)
        assert lb.cost_to_go[3] == INF and 3 not in lb.preproc_set

    def test_unbounded_first_iteration(self, corridors):
        seq = extend_samples(SampleSequence.start(corridors, 0), 300, corridors)
        t = build_neighbor_table(seq.points, connection_radius(len(seq.points), PARAMS))
        lb = estimate_cost_to_go(corridors, seq.points, t, INF)
        src = goal_sources(corridors, seq.points)
        comp = bounded_dijkstra(t, [(0, 0.0)]).traversed | bounded_dijkstra(t, src).traversed
        assert lb.preproc_set == comp
        assert lb.cost_to_go == bounded_dijkstra(t, src).distances

    def test_no_lp_calls(self, corridors):
        seq = extend_samples(SampleSequence.start(corridors, 1), 200, corridors)
        c = CallCounters()
        t = NeighborTable(seq.points, connection_radius(len(seq.points), PARAMS), c)
        estimate_cost_to_go(corridors, seq.points, t, 1.5, c)
        assert c.lp_calls == 0 and not c.lp_edges
        assert c.nn_calls == t.materialized_count

    def test_contains_all_promising_nodes(self, corridors):
        for seed in range(5):
            seq = extend_samples(SampleSequence.start(corridors, seed), 250, corridors)
            pts = seq.points
            t = build_neighbor_table(pts, connection_radius(len(pts), PARAMS))
            h_adj = [([], []) for _ in pts]
            for i, (nb, cs) in enumerate(t.adjacency()):
                for j, cst in zip(nb, cs):
                    if collision_free(corridors, pts[i], pts[j]):
                        h_adj[i][0].append(j)
                        h_adj[i][1].append(cst)
            h_graph = type("H", (), {"__len__": lambda s: len(pts), "neighbors": lambda s, i: h_adj[i]})()
            src = goal_sources(corridors, pts)
            come = bounded_dijkstra(h_graph, [(0, 0.0)]).distances
            go = bounded_dijkstra(h_graph, src).distances
            best = min(come[i] for i, _ in src)
            if math.isinf(best):
                continue
            for c_prev in (best * 1.02, best * 1.3):
                lb = estimate_cost_to_go(corridors, pts, t, c_prev)
                promising = {x for x in range(len(pts)) if is_promising(come[x], go[x], c_prev)}
                assert promising <= lb.preproc_set
                for x in promising:
                    assert lb.cost_to_go[x] <= go[x] + 1e-12


class TestPromising:
    def test_first_iteration(self):
        assert is_promising(3.0, 4.0, INF)

    def test_above(self):
        assert not is_promising(0.6, 0.7, 1.2)

    def test_equal_is_not_promising(self):
        assert not is_promising(0.5, 0.7, 1.2)


class TestMplb:
    def test_negative_epsilon(self):
        with pytest.raises(InvalidInputError):
            MplbParams(50, 3, PARAMS, epsilon=-0.1)

    def test_first_iteration_discards_nothing(self, corridors):
        for seed in range(5):
            first = mplb(corridors, MplbParams(50, 1, PARAMS, seed))[0]
            assert first.discarded == 0
            seq = extend_samples(SampleSequence.start(corridors, seed), 50, corridors)
            t = build_neighbor_table(seq.points, connection_radius(52, PARAMS))
            src = goal_sources(corridors, seq.points)
            comp = bounded_dijkstra(t, [(0, 0.0)]).traversed | bounded_dijkstra(t, src).traversed
            assert first.preproc_size == len(comp)

    def test_matches_afmt_at_zero_epsilon(self, corridors):
        for seed in range(4):
            a = afmt(corridors, 50, 4, PARAMS, seed)
            b = mplb(corridors, MplbParams(50, 4, PARAMS, seed))
            rep = compare_runs(a, b, 0.0)
            assert rep.all_pass, rep

    def test_ano_sandwich(self, corridors):
        for seed in range(4):
            exact = mplb(corridors, MplbParams(50, 4, PARAMS, seed))
            relaxed = mplb(corridors, MplbParams(50, 4, PARAMS, seed, epsilon=0.2))
            assert all(r.planner == "ano_mplb" for r in relaxed)
            for e, r in zip(exact, relaxed):
                if math.isinf(e.cost):
                    assert math.isinf(r.cost)
                else:
                    assert e.cost <= r.cost <= 1.2 * e.cost + 1e-9

    def test_nn_calls_equal_preproc_size(self, corridors):
        for seed in range(3):
            for r in mplb(corridors, MplbParams(50, 4, PARAMS, seed)):
                assert r.counters.nn_calls == r.preproc_size
                assert r.preproc_lp_calls == 0

    def test_ceiling_keeps_previous_path(self, corridors):
        recs = mplb(corridors, MplbParams(50, 5, PARAMS, 7))
        for prev, cur in zip(recs, recs[1:]):
            assert cur.cost <= prev.cost
            if cur.outcome == "ceiling":
                assert cur.cost == prev.cost and cur.path == prev.path

    def test_restricted_radius_option(self, corridors):
        recs = mplb(corridors, MplbParams(50, 3, PARAMS, 0, restricted_radius=True))
        assert len(recs) == 3 and all(r.preproc_lp_calls == 0 for r in recs)

    def test_deterministic(self, corridors):
        a = mplb(corridors, MplbParams(50, 4, PARAMS, 3))
        b = mplb(corridors, MplbParams(50, 4, PARAMS, 3))
        for ra, rb in zip(a, b):
            ra.wall_time = rb.wall_time = 0.0
            assert ra == rb
