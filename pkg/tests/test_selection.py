import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smartselect.centrality import CentralityScores, Measure, compute
from smartselect.graph import build_graph, sbm_generate
from smartselect.selection import (SelectionPlan, Strategy, random_select, select_all_at_once,
                                   smart_select)

from conftest import random_graph, star

TWO_TRIANGLES = build_graph([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6)
NON_VOTE = [Measure.DEGREE, Measure.CLOSENESS, Measure.BETWEENNESS, Measure.PAGERANK]


def scores(vals):
    return CentralityScores(Measure.DEGREE, np.asarray(vals, dtype=float))


class TestAllAtOnce:
    def test_top(self):
        assert select_all_at_once(scores([3, 1, 2]), 2).selected == [0, 2]

    def test_ties(self):
        assert select_all_at_once(scores([1, 1, 1, 1]), 3).selected == [0, 1, 2]

    def test_zero_budget(self):
        assert select_all_at_once(scores([1, 2]), 0).selected == []

    def test_over_budget(self):
        with pytest.raises(ValueError):
            select_all_at_once(scores([1, 2]), 3)


class TestSmart:
    def test_star(self):
        assert smart_select(star(), "degree", 2, per_round=1).selected == [0, 1]

    def test_two_triangles(self):
        assert smart_select(TWO_TRIANGLES, "degree", 2, per_round=1).selected == [0, 3]

    @pytest.mark.parametrize("measure", NON_VOTE)
    def test_single_round_equals_all_at_once(self, measure):
        rng = np.random.default_rng(1)
        for _ in range(10):
            g = random_graph(rng, 15, p=0.2)
            b = int(rng.integers(0, 16))
            for per_round in (b, b + 3):
                got = smart_select(g, measure, b, per_round=max(per_round, 1)).selected
                assert got == select_all_at_once(compute(g, measure), b).selected

    def test_voterank_single_call(self):
        g, _, _ = sbm_generate([10, 10], 0.5, 0.05, seed=2)
        plan = smart_select(g, "voterank", 7, per_round=2)
        from smartselect.centrality import voterank
        assert plan.selected == voterank(g, 7).selected

    def test_edgeless_residual(self):
        plan = smart_select(star(6), "degree", 6, per_round=1)
        assert plan.selected == [0, 1, 2, 3, 4, 5]

    def test_final_round_truncated(self):
        g, _, _ = sbm_generate([20, 20], 0.3, 0.02, seed=4)
        plan = smart_select(g, "betweenness", 13, per_round=5)
        assert len(plan.selected) == 13 == len(set(plan.selected))

    def test_caller_graph_untouched(self):
        g = random_graph(np.random.default_rng(0), 20, p=0.2)
        before = (g.offsets.copy(), g.neighbors.copy())
        smart_select(g, "closeness", 10, per_round=3)
        np.testing.assert_array_equal(g.offsets, before[0])
        np.testing.assert_array_equal(g.neighbors, before[1])

    def test_errors(self):
        with pytest.raises(ValueError):
            smart_select(star(), "degree", 6)
        with pytest.raises(ValueError):
            smart_select(star(), "degree", 2, per_round=0)
        with pytest.raises(ValueError):
            smart_select(star(), "eigenvector", 2)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 5000), measure=st.sampled_from(list(Measure)))
    def test_plan_properties(self, seed, measure):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, 14, p=0.25, connected=True)
        b = int(rng.integers(1, 15))
        k = int(rng.integers(1, 6))
        plan = smart_select(g, measure, b, per_round=k)
        assert len(plan.selected) == b == len(set(plan.selected))
        assert all(0 <= v < g.n for v in plan.selected)
        assert plan.selected == smart_select(g, measure, b, per_round=k).selected


class TestRandom:
    def test_permutation(self):
        assert sorted(random_select(9, 9, 3).selected) == list(range(9))

    def test_seeded(self):
        assert random_select(50, 10, 7).selected == random_select(50, 10, 7).selected

    def test_single(self):
        assert random_select(1, 1, 0).selected == [0]

    def test_over_budget(self):
        with pytest.raises(ValueError):
            random_select(3, 4)


def test_plan_json_roundtrip():
    plan = smart_select(star(), "pagerank", 3, per_round=2, alpha=0.2)
    back = SelectionPlan.from_json(plan.to_json())
    assert back.selected == plan.selected and back.strategy is Strategy.SMART
    assert back.measure is Measure.PAGERANK and back.params == {"alpha": 0.2}


def test_plan_mask_range():
    plan = SelectionPlan(Strategy.RANDOM, None, 1, None, [7])
    with pytest.raises(ValueError):
        plan.mask(5)
