import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paretocal import (
    BudgetGraph,
    CalibrationSpec,
    ConfigGrid,
    LossTable,
    ObjectiveSpec,
    SimplexWeights,
    alpha_constrained,
    alpha_delta_constrained,
    bonferroni,
    bonferroni_select,
    build_3d_hamming_graph,
    constrained_path,
    fixed_sequence_test,
    low_risk_path,
    pareto_testing,
    sgt,
    sgt_3d,
    split_examples,
    split_fst_baseline,
    time_share,
)
from paretocal.pvalues import hb_pvalue
from paretocal.testing import METHODS


def _spec(alpha=0.3, delta=0.1, **kw):
    return CalibrationSpec(
        objectives=(
            ObjectiveSpec("acc", "controlled", alpha),
            ObjectiveSpec("cost", "free"),
        ),
        delta=delta,
        **kw,
    )


def _random_table(rng, m=400, n_configs=27, grid=None):
    """Correlated accuracy/cost columns with a real trade-off."""
    base = rng.random(n_configs)
    acc = (rng.random((m, n_configs)) < base * 0.4).astype(float)
    cost = np.clip(1.0 - base[None, :] + rng.normal(0, 0.05, (m, n_configs)), 0, 1)
    return LossTable({"acc": acc, "cost": cost}, grid=grid)


class TestSplitExamples:
    def test_partition(self):
        opt, test = split_examples(10, 0.5, seed=0)
        assert len(opt) == 5 and len(test) == 5
        assert sorted(np.concatenate([opt, test]).tolist()) == list(range(10))

    def test_deterministic(self):
        a = split_examples(100, 0.3, seed=4)
        b = split_examples(100, 0.3, seed=4)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        c = split_examples(100, 0.3, seed=5)
        assert not np.array_equal(a[0], c[0])

    def test_both_sides_non_empty_at_extremes(self):
        opt, test = split_examples(2, 0.999, seed=0)
        assert len(opt) == 1 and len(test) == 1
        with pytest.raises(ValueError):
            split_examples(1, 0.5, seed=0)


class TestFixedSequenceTest:
    def test_stops_at_first_failure(self):
        res = fixed_sequence_test([0.01, 0.05, 0.2, 0.01], delta=0.1)
        assert res.stop_index == 2
        assert res.rejected == [0, 1]

    def test_rejects_all(self):
        res = fixed_sequence_test([0.01, 0.02], delta=0.1)
        assert res.rejected == [0, 1]

    def test_boundary_is_failure(self):
        assert fixed_sequence_test([0.1], delta=0.1).rejected == []

    @given(
        st.lists(st.floats(0.0, 1.0), min_size=0, max_size=30),
        st.floats(0.01, 0.99),
    )
    @settings(max_examples=200)
    def test_prefix_property(self, pvals, delta):
        res = fixed_sequence_test(pvals, delta)
        for i in range(res.stop_index):
            assert pvals[i] < delta
        if res.stop_index < len(pvals):
            assert pvals[res.stop_index] >= delta


class TestBonferroni:
    def test_threshold(self):
        rejected = bonferroni({0: 0.004, 1: 0.006, 2: 0.001}, delta=0.1, n_tests=20)
        assert rejected == {0, 2}

    def test_n_tests_validated(self):
        with pytest.raises(ValueError):
            bonferroni({0: 0.1, 1: 0.1}, 0.1, n_tests=1)


class TestSGT:
    def test_hand_trace_budget_recycling(self):
        graph = BudgetGraph(2, (0.05, 0.05), {0: ((1, 1.0),), 1: ((0, 1.0),)})
        # node 1 alone would fail (0.08 >= 0.05) but inherits node 0's budget
        assert sgt(graph, [0.01, 0.08]) == [0, 1]
        assert sgt(graph, [0.01, 0.2]) == [0]

    def test_stops_at_first_failure(self):
        graph = BudgetGraph(3, (0.1, 0.0, 0.0), {0: ((1, 1.0),), 1: ((2, 1.0),)})
        # node 1 fails, so node 2 is never reached even though p is tiny
        assert sgt(graph, [0.01, 0.5, 1e-9]) == [0]

    def test_budget_conservation_trace(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            raw = rng.random(n)
            budgets = 0.1 * raw / raw.sum()
            weights = {}
            for src in range(n):
                dsts = [d for d in range(n) if d != src]
                w = rng.dirichlet(np.ones(len(dsts))) * rng.random()
                weights[src] = tuple(zip(dsts, w))
            graph = BudgetGraph(n, tuple(budgets), weights)
            _, trace = sgt(graph, rng.random(n), return_trace=True)
            for step in trace:
                assert step.sum() <= 0.1 + 1e-12

    def test_chain_graph_equals_fst(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 20))
            p = rng.random(n)
            delta = float(rng.uniform(0.01, 0.5))
            budgets = (delta,) + (0.0,) * (n - 1)
            weights = {i: ((i + 1, 1.0),) for i in range(n - 1)}
            graph = BudgetGraph(n, budgets, weights)
            assert sgt(graph, p) == fixed_sequence_test(p, delta).rejected

    def test_graph_validation(self):
        with pytest.raises(ValueError):
            BudgetGraph(2, (0.1,))
        with pytest.raises(ValueError):
            BudgetGraph(2, (0.1, -0.1))
        with pytest.raises(ValueError):
            BudgetGraph(2, (0.1, 0.0), {0: ((1, 0.7), (1, 0.7))})
        with pytest.raises(ValueError):
            BudgetGraph(2, (0.1, 0.0), {0: ((5, 1.0),)})


class TestHammingGraph:
    def test_budget_at_corner_and_forward_edges(self):
        graph = build_3d_hamming_graph((2, 2, 2), (0, 0, 0), delta=0.1)
        assert graph.delta == pytest.approx(0.1)
        assert graph.initial_budgets[0] == pytest.approx(0.1)
        # corner node has three forward neighbors, each with weight 1/3
        edges = dict(graph.weights[0])
        assert set(edges) == {4, 2, 1}
        assert all(w == pytest.approx(1 / 3) for w in edges.values())
        # the opposite corner has no forward neighbors
        assert 7 not in graph.weights

    def test_opposite_corner_reverses_direction(self):
        graph = build_3d_hamming_graph((2, 3), (1, 2), delta=0.2)
        idx = int(np.ravel_multi_index((1, 2), (2, 3)))
        assert graph.initial_budgets[idx] == pytest.approx(0.2)
        edges = dict(graph.weights[idx])
        assert set(edges) == {
            int(np.ravel_multi_index((0, 2), (2, 3))),
            int(np.ravel_multi_index((1, 1), (2, 3))),
        }

    def test_interior_corner_rejected(self):
        with pytest.raises(ValueError):
            build_3d_hamming_graph((3, 3), (1, 0), delta=0.1)


class TestParetoTesting:
    def test_rejected_is_tested_prefix(self, rng):
        table = _random_table(rng)
        out = pareto_testing(table, _spec(), split_seed=3)
        assert not out.abstained
        prefix = [g for g, _, _ in out.ordered_candidates[: out.stop_index]]
        assert list(out.rejected) == prefix
        for g in out.rejected:
            assert out.testing_pvalues[g] < 0.1

    def test_candidates_ordered_by_pvalue(self, rng):
        table = _random_table(rng)
        out = pareto_testing(table, _spec(), split_seed=3)
        ps = [p for _, p, _ in out.ordered_candidates]
        assert ps == sorted(ps)

    def test_selection_minimizes_testing_cost(self, rng):
        table = _random_table(rng)
        out = pareto_testing(table, _spec(), split_seed=3)
        free = out.diagnostics["free_testing"]
        sel_cost = free[out.selected[0]][0]
        assert sel_cost == min(free[g][0] for g in out.rejected)

    def test_deterministic(self, rng):
        table = _random_table(rng)
        a = pareto_testing(table, _spec(), split_seed=9)
        b = pareto_testing(table, _spec(), split_seed=9)
        assert a == b

    def test_front_budget_truncates(self, rng):
        table = _random_table(rng)
        out = pareto_testing(table, _spec(front_budget=2), split_seed=3)
        assert len(out.ordered_candidates) <= 2

    def test_abstains_on_hopeless_table(self):
        table = LossTable(
            {"acc": np.ones((40, 5)), "cost": np.full((40, 5), 0.5)}
        )
        out = pareto_testing(table, _spec(alpha=0.05), split_seed=0)
        assert out.abstained
        assert out.selected == ()

    def test_split_hash_recorded(self, rng):
        table = _random_table(rng)
        out = pareto_testing(table, _spec(), split_seed=3)
        assert len(out.diagnostics["split_hash"]) == 16
        assert out.diagnostics["m1"] + out.diagnostics["m2"] == 400


class TestBaselines:
    def test_bonferroni_select_threshold(self, rng):
        table = _random_table(rng)
        spec = _spec()
        out = bonferroni_select(table, spec)
        thr = spec.delta / table.config_count
        # every rejected p-value clears the corrected threshold
        m = table.example_count
        acc = table.matrix("acc").mean(axis=0)
        for g in out.rejected:
            assert hb_pvalue(acc[g], 0.3, m) < thr
        for g in range(table.config_count):
            if g not in out.rejected:
                assert hb_pvalue(acc[g], 0.3, m) >= thr

    def test_sgt_3d_needs_grid(self, rng):
        with pytest.raises(ValueError):
            sgt_3d(_random_table(rng), _spec())

    def test_sgt_3d_runs_on_grid(self, rng):
        grid = ConfigGrid(((0.0, 0.5, 1.0),) * 3)
        table = _random_table(rng, grid=grid)
        out = sgt_3d(table, _spec())
        assert out.diagnostics["method"] == "sgt_3d"
        assert out.diagnostics["corner"] == [0, 0, 0]
        assert len(set(out.rejected)) == len(out.rejected)

    def test_split_fst_dedupes_and_tests(self, rng):
        table = _random_table(rng)
        out = split_fst_baseline(table, _spec(), split_seed=3)
        order = [g for g, _, _ in out.ordered_candidates]
        assert len(set(order)) == len(order)
        for g in out.rejected:
            assert out.testing_pvalues[g] < 0.1

    def test_low_risk_path_visits_corners(self, rng):
        grid = ConfigGrid(((0.0, 0.5, 1.0),) * 3)
        table = _random_table(rng, grid=grid)
        out = low_risk_path(table, _spec(), split_seed=3)
        order = [g for g, _, _ in out.ordered_candidates]
        assert order[0] == 0
        assert order[-1] == len(grid) - 1
        # one grid step at a time
        for a, b in zip(order, order[1:]):
            ma, mb = np.array(grid.index_to_multi(a)), np.array(grid.index_to_multi(b))
            assert np.abs(mb - ma).sum() == 1
        assert out.diagnostics["fallback_path"] in (False, True)

    def test_constrained_path_orders_conservative_first(self, rng):
        table = _random_table(rng)
        out = constrained_path(table, _spec(), split_seed=3)
        accs = table.matrix("acc")
        # later entries solve looser problems, so opt-split risk grows
        order = [g for g, _, _ in out.ordered_candidates]
        assert len(set(order)) == len(order)

    def test_naive_methods_select_single_config(self, rng):
        table = _random_table(rng)
        spec = _spec()
        pick = alpha_constrained(table, spec)
        assert pick is not None
        acc = table.matrix("acc").mean(axis=0)
        cost = table.matrix("cost").mean(axis=0)
        feasible = acc < 0.3
        assert feasible[pick]
        assert cost[pick] == cost[feasible].min()

    def test_alpha_delta_constrained_uses_pvalue(self, rng):
        table = _random_table(rng)
        spec = _spec()
        pick = alpha_delta_constrained(table, spec)
        m = table.example_count
        acc = table.matrix("acc").mean(axis=0)
        assert hb_pvalue(acc[pick], 0.3, m) < spec.delta

    def test_infeasible_returns_none(self):
        table = LossTable(
            {"acc": np.ones((20, 3)), "cost": np.zeros((20, 3))}
        )
        spec = _spec(alpha=0.05)
        assert alpha_constrained(table, spec) is None
        assert alpha_delta_constrained(table, spec) is None

    def test_registry_runs_everything(self, rng):
        grid = ConfigGrid(((0.0, 0.5, 1.0),) * 3)
        table = _random_table(rng, grid=grid)
        spec = _spec()
        for name, fn in METHODS.items():
            out = fn(table, spec, 5)
            assert out.diagnostics["method"] == name


class TestTimeShare:
    def test_degenerate_weights_bit_identical(self):
        picks = time_share([4, 9], SimplexWeights((1.0, 0.0)), 50, seed=0)
        assert np.array_equal(picks, np.full(50, 4))

    def test_weights_validated(self):
        with pytest.raises(ValueError):
            SimplexWeights((0.5, 0.4))
        with pytest.raises(ValueError):
            SimplexWeights((1.5, -0.5))
        with pytest.raises(ValueError):
            time_share([1], SimplexWeights((0.5, 0.5)), 10, seed=0)

    def test_mixture_risk_identity(self, rng):
        # per-example randomization over two configurations attains the
        # weighted average of their risks, within Monte Carlo noise
        n = 20_000
        q = np.array([0.3, 0.05])
        w = SimplexWeights((0.7, 0.3))
        picks = time_share([0, 1], w, n, seed=2)
        losses = (rng.random(n) < q[picks]).astype(float)
        expected = 0.7 * 0.3 + 0.3 * 0.05
        sigma = np.sqrt(expected * (1 - expected) / n)
        assert abs(losses.mean() - expected) <= 3 * sigma
