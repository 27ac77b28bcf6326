from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pricedquery as pq
from pricedquery import boolfn as bf
from pricedquery import trees
from pricedquery.errors import InputError
from pricedquery.strategy import (
    Ask,
    Final,
    Lottery,
    Stop,
    budget_samples,
    sample_inputs,
)

from conftest import full_tree, function_and_costs

AND2 = pq.and_fn(2)


class TestSStar:
    @pytest.mark.parametrize("f", [AND2, pq.majority(3), pq.constant(2, -1)])
    def test_zero_budget(self, f):
        t = pq.run_s_star_b(f, [1] * f.n, 0, [1] * f.n)
        assert t.steps == []
        assert t.cost == 0
        assert t.output == pq.SStar(f, [1] * f.n, 0).profiler.sign(pq.Restriction())

    def test_and_unit_budget_two(self):
        t = pq.run_s_star_b(AND2, [1, 1], 2, (1, 0), seed=4)
        assert t.steps == [(0, 1, 1), (1, 0, 2)]
        assert t.lottery == (Fraction(1), "queried")
        assert t.output == -1

    @pytest.mark.parametrize("x", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_and_budget_three_lottery(self, x):
        S = pq.SStar(AND2, [1, 4], 3)
        step = S.step(pq.Restriction([(0, x[0])]), 1)
        assert step == Lottery(Fraction(1, 2), Final(1), Stop(-1 if x[0] == 0 else 1))
        assert pq.strategy_stats_exact(S).expected_cost == 3

    def test_first_step_asks_cheapest_influential(self):
        assert pq.SStar(AND2, [1, 4], 3).step(pq.Restriction(), 0) == Ask(0)

    def test_lottery_outcome_both_branches_seen(self):
        outcomes = {pq.run_s_star_b(AND2, [1, 4], 3, (1, 1), seed=s).lottery[1] for s in range(40)}
        assert outcomes == {"queried", "skipped"}

    def test_transcript_invariants(self):
        f, c, B = pq.tribes(2, 2), [3, 1, 2, 5], 7
        for s in range(30):
            x = np.random.default_rng(s).integers(0, 2, 4)
            t = pq.run_s_star_b(f, c, B, x, seed=s)
            prev = 0
            for coord, bit, cum in t.steps:
                assert cum == prev + c[coord] and bit == x[coord]
                prev = cum
            assert len(set(t.queried)) == len(t.queried)
            assert t.cost <= B + max(c)
            before = t.steps[:-1] if t.lottery and t.lottery[1] == "queried" else t.steps
            assert (before[-1][2] if before else 0) < B or not t.lottery

    def test_large_budget_evaluates_exactly(self):
        f = pq.tribes(2, 2)
        stats = pq.strategy_stats_exact(pq.SStar(f, [1] * 4, 100))
        assert stats.error == 0
        assert stats.expected_cost <= 4

    def test_early_stop_on_constant(self):
        f = AND2
        plain = pq.strategy_stats_exact(pq.SStar(f, [1, 1], 2))
        early = pq.strategy_stats_exact(pq.SStar(f, [1, 1], 2, early_stop_on_constant=True))
        assert early.expected_cost < plain.expected_cost
        assert early.error == plain.error == 0

    def test_negative_budget(self):
        with pytest.raises(InputError):
            pq.SStar(AND2, [1, 1], -1)

    def test_seed_determinism(self):
        runs = [pq.run_s_star_b(pq.majority(5), [2, 1, 3, 1, 2], 5, (1, 0, 1, 1, 0), seed=11) for _ in range(2)]
        assert runs[0] == runs[1]

    @given(function_and_costs(1, 5), st.sampled_from(["half", "total", "double"]))
    def test_expected_cost_identity(self, fc, which):
        f, c = fc
        total = sum(c)
        B = {"half": total // 2, "total": total, "double": 2 * total}[which]
        assert pq.strategy_stats_exact(pq.SStar(f, c, B)).expected_cost == min(B, total)


class TestSDiamond:
    def test_immediate_stop(self):
        t = pq.run_s_diamond(AND2, [1, 1], 0.3, (1, 1))
        assert t.steps == [] and t.output == -1

    @pytest.mark.parametrize("x", [(0, 0), (1, 0), (0, 1), (1, 1)])
    def test_and_trace(self, x):
        t = pq.run_s_diamond(AND2, [1, 1], 0.1, x)
        assert t.queried == ([0, 1] if x[0] == 1 else [0])
        assert t.output == AND2.evaluate(x)

    def test_and_stats(self):
        stats = pq.strategy_stats_exact(pq.SDiamond(AND2, [1, 1], 0.1))
        assert stats.error == 0
        assert stats.expected_cost == Fraction(3, 2)

    @pytest.mark.parametrize("v", [1, -1])
    def test_constant(self, v):
        t = pq.run_s_diamond(pq.constant(3, v), [1, 1, 1], 0.01, (0, 1, 0))
        assert t.steps == [] and t.output == v

    def test_eps_range(self):
        with pytest.raises(InputError):
            pq.SDiamond(AND2, [1, 1], 0.5)

    @given(function_and_costs(1, 5), st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 4)]))
    def test_error_at_most_eps(self, fc, eps):
        f, c = fc
        assert pq.strategy_stats_exact(pq.SDiamond(f, c, eps)).error <= eps


class TestTruncated:
    def test_cutoff_above_worst_is_identity(self):
        S = pq.SDiamond(pq.tribes(2, 2), [1, 2, 1, 2], 0.05)
        worst = pq.strategy_stats_exact(S).worst_cost
        assert pq.truncate_at_cost(S, worst).expand() == S.expand()

    def test_parity_full_evaluation(self):
        f = pq.parity(3)
        S = pq.TreeStrategy(f, [1, 1, 1], full_tree([0, 1, 2], f))
        stats = pq.strategy_stats_exact(pq.truncate_at_cost(S, 2))
        assert stats.error == Fraction(1, 2)
        assert stats.worst_cost == 2
        for x in bf.all_inputs(3):
            t = pq.truncate_at_cost(S, 2).run(x)
            assert len(t.steps) == 2 and t.output == 1

    @given(function_and_costs(1, 5), st.integers(1, 20))
    def test_union_bound(self, fc, cutoff):
        f, c = fc
        S = pq.SDiamond(f, c, Fraction(1, 20))
        base = pq.strategy_stats_exact(S)
        cut = pq.strategy_stats_exact(pq.truncate_at_cost(S, cutoff))
        X = bf.all_inputs(f.n)
        over = np.mean([S.run(x).cost > cutoff for x in X])
        assert cut.worst_cost <= cutoff
        assert cut.error <= base.error + Fraction(float(over)).limit_denominator(1 << f.n)

    def test_wraps_lottery(self):
        S = pq.truncate_at_cost(pq.SStar(AND2, [1, 4], 3), 2)
        assert pq.strategy_stats_exact(S).worst_cost <= 2

    def test_positive_cutoff(self):
        with pytest.raises(InputError):
            pq.truncate_at_cost(pq.SDiamond(AND2, [1, 1], 0.1), 0)


class TestTreeStrategy:
    def test_runs_tree(self):
        tree = full_tree([1, 0], AND2)
        S = pq.TreeStrategy(AND2, [1, 4], tree)
        assert S.run((1, 1)).steps == [(1, 1, 4), (0, 1, 5)]
        assert S.expand() == tree

    def test_rejects_chance(self):
        with pytest.raises(InputError):
            pq.TreeStrategy(AND2, [1, 1], trees.Chance(Fraction(1, 2), trees.Leaf(1), trees.Leaf(1)))


class TestConfig:
    def test_builds_each_kind(self):
        star = pq.StrategyConfig("s_star", budget=3).build(AND2, [1, 4])
        assert isinstance(star, pq.SStar) and star.budget == 3
        assert isinstance(pq.StrategyConfig("s_diamond", eps=0.1).build(AND2, [1, 4]), pq.SDiamond)
        cut = pq.StrategyConfig("truncated", inner=pq.StrategyConfig("s_star", budget=3), cutoff=2)
        assert isinstance(cut.build(AND2, [1, 4]), pq.Truncated)

    @pytest.mark.parametrize("cfg", [pq.StrategyConfig("s_star"), pq.StrategyConfig("truncated"),
                                     pq.StrategyConfig("other")])
    def test_invalid(self, cfg):
        with pytest.raises(InputError):
            cfg.build(AND2, [1, 1])


class TestMonteCarlo:
    def test_empty_strategy_on_constant(self):
        f = pq.constant(3, 1)
        stats = pq.estimate_strategy_stats(pq.SStar(f, [1, 1, 1], 0), 500, seed=1)
        assert stats.error == 0 and stats.expected_cost == 0
        assert stats.query_prob == (0.0, 0.0, 0.0)

    def test_full_budget_on_and(self):
        stats = pq.estimate_strategy_stats(pq.SStar(AND2, [1, 1], 2), 4096, seed=2)
        assert stats.error == 0
        assert abs(stats.expected_cost - 2) <= 3 * stats.cost_se + 1e-12

    def test_simulate_matches_run(self):
        S = pq.SStar(pq.tribes(2, 2), [2, 1, 3, 1], 5)
        rng = np.random.default_rng(0)
        X = sample_inputs(S.f, 200, rng)
        U = rng.random(200)
        sim = pq.simulate(S, X, U)

        class Fixed:
            def __init__(self, u):
                self.u = u

            def random(self):
                return self.u

        for r in range(200):
            t = S.run(X[r], rng=Fixed(U[r]))
            assert sim.outputs[r] == t.output
            assert sim.costs[r] == t.cost
            assert set(np.flatnonzero(sim.queried[r])) == set(t.queried)

    def test_sample_inputs_respect_restriction(self):
        X = sample_inputs(pq.parity(3).restrict(1, 1), 50, np.random.default_rng(0))
        assert (X[:, 1] == 1).all()

    def test_converges_to_exact_on_corpus(self):
        from pricedquery.corpus import corpus_instances

        for _, f, c in corpus_instances(0):
            S = pq.SStar(f, c, sum(c) // 2)
            exact = pq.strategy_stats_exact(S)
            est = pq.estimate_strategy_stats(S, 4000, seed=3)
            assert abs(est.error - float(exact.error)) <= 3 * est.error_se + 1e-9
            assert abs(est.expected_cost - float(exact.expected_cost)) <= 3 * est.cost_se + 1e-9

    def test_rejects_zero_samples(self):
        with pytest.raises(InputError):
            pq.estimate_strategy_stats(pq.SStar(AND2, [1, 1], 1), 0)


class TestFindBudget:
    def test_constant(self):
        assert pq.find_budget(pq.constant(3, 1), [2, 3, 5], 0.1, seed=0).budget == 4

    def test_parity2(self):
        res = pq.find_budget(pq.parity(2), [1, 1], 0.1, seed=0)
        assert res.budget == 2 and res.doublings == 1 and res.error == 0

    def test_and2(self):
        res = pq.find_budget(AND2, [1, 4], 0.05, seed=0)
        assert res.budget == 8 and res.doublings == 3
        assert [b for b, _ in res.history] == [2, 4, 8]

    def test_exact_errors_along_the_way(self):
        errs = [pq.strategy_stats_exact(pq.SStar(AND2, [1, 4], B)).error for B in (2, 4, 8)]
        assert errs == [Fraction(3, 16), Fraction(1, 16), 0]

    def test_sample_count(self):
        assert budget_samples(0.1, 0.05) == 2952
        assert pq.find_budget(AND2, [1, 4], 0.1, seed=0).samples == 2952

    def test_eps_range(self):
        with pytest.raises(InputError):
            pq.find_budget(AND2, [1, 1], 0.6)
