"""Verification suites behind ``pricedquery verify``.

Every suite yields report rows ``{suite, instance, check, lhs, rhs, holds}``
with exact rational ``lhs``/``rhs``. All randomness descends from ``seed``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import analysis, oracle, trees
from . import boolfn as bf
from .corpus import corpus_instances
from .errors import InputError
from .influence import total_influence_exact
from .rng import stream
from .strategy import SDiamond, SStar, TreeStrategy, truncate_at_cost

SUITES = ("osss", "identities", "cost_lemma", "accuracy", "warmup", "oracle", "markov")
EPSILONS = (Fraction(1, 20), Fraction(1, 10))


def _row(suite, instance, check, lhs, rhs, holds):
    return {"suite": suite, "instance": instance, "check": check,
            "lhs": Fraction(lhs), "rhs": Fraction(rhs), "holds": bool(holds)}


def _report_row(suite, instance, rep):
    return _row(suite, instance, rep.name, rep.lhs, rep.rhs, rep.holds)


def _label(f):
    return bf.dump_spec(f)


def random_pairs(count, max_n, seed, min_n=1):
    """``count`` random (f, tree, costs) triples with ``min_n <= n <= max_n``."""
    rng = stream(seed, "pairs")
    out = []
    for _ in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        f = bf.from_table(n, (rng.random(1 << n) < rng.random()).astype(np.uint8))
        tree = trees.random_tree(range(n), rng, stop_prob=0.25, force_query=True)
        costs = [int(v) for v in rng.integers(1, 9, size=n)]
        out.append((f, tree, costs))
    return out


def suite_osss(max_n=5, seed=0, count=500):
    rows = []
    for f, tree, costs in random_pairs(count, max_n, seed):
        name = _label(f)
        rows.append(_report_row("osss", name, analysis.osss_check(f, tree)))
        rows.append(_report_row("osss", name, analysis.cost_osss_witness(f, costs, tree)))
    return rows


def all_functions(n):
    for bits in range(1 << (1 << n)):
        yield bf.from_table(n, [(bits >> x) & 1 for x in range(1 << n)])


def _full_depth(tree, n):
    return all(len(path) == n for path, _ in trees.iter_leaves(tree))


def suite_identities(max_n=6, seed=0, count=200, all_shapes=False):
    """Every function with n <= 3 against tree shapes, then ``count`` random cases with 4 <= n <= 6.

    Shapes are exhaustive for n <= 2; at n = 3 only the 12 full-depth shapes
    are used unless ``all_shapes`` (244 shapes per function, about a minute).
    """
    rows = []
    small = min(3, max_n)
    for n in range(1, small + 1):
        shapes = [t for t in trees.iter_shapes(range(n)) if all_shapes or n < 3 or _full_depth(t, n)]
        for f in all_functions(n):
            name = _label(f)
            for i in range(n):
                rows.append(_report_row("identities", name, analysis.influence_split_check(f, i)))
            costs = list(range(1, n + 1))
            for shape in shapes:
                tree = analysis.make_consistent(f, shape)
                rows.append(_report_row("identities", name, analysis.avg_influence_identity_check(f, tree)))
                rows.append(_report_row("identities", name, analysis.delta_cost_identity_check(f, costs, tree)))
    if max_n >= 4:
        for f, tree, costs in random_pairs(count, min(6, max_n), seed, min_n=4):
            name = _label(f)
            i = int(stream(seed, "split", len(rows)).integers(f.n))
            rows.append(_report_row("identities", name, analysis.influence_split_check(f, i)))
            rows.append(_report_row("identities", name, analysis.avg_influence_identity_check(f, tree)))
            consistent = analysis.make_consistent(f, tree)
            rows.append(_report_row("identities", name, analysis.avg_influence_identity_check(f, consistent)))
            rows.append(_report_row("identities", name, analysis.delta_cost_identity_check(f, costs, tree)))
    return rows


def random_budget_triples(count, max_n, seed):
    rng = stream(seed, "budget-triples")
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        f = bf.from_table(n, (rng.random(1 << n) < rng.random()).astype(np.uint8))
        costs = [int(v) for v in rng.integers(1, 9, size=n)]
        total = sum(costs)
        B = (total // 2, total, 2 * total)[int(rng.integers(3))]
        out.append((f, costs, B))
    return out


def suite_cost_lemma(max_n=6, seed=0, count=100):
    rows = []
    for f, costs, B in random_budget_triples(count, max_n, seed):
        stats = oracle.strategy_stats_exact(SStar(f, costs, B))
        target = min(B, sum(costs))
        rows.append(_row("cost_lemma", f"{_label(f)} c={costs} B={B}", "expected_cost",
                         stats.expected_cost, target, stats.expected_cost == target))
    return rows


def _corpus(max_n, seed):
    items = []
    for kind in ("unit", "uniform"):
        for spec, f, costs in corpus_instances(seed, kind):
            if f.n <= max_n:
                items.append((f"{spec.label()} c={list(costs)}", f, costs))
    return items


def suite_accuracy(max_n=8, seed=0):
    rows = []
    for name, f, costs in _corpus(max_n, seed):
        inf = total_influence_exact(f)
        for eps in EPSILONS:
            worst = oracle.opt_worst_eps(f, costs, eps).value
            budget = worst * inf / eps + 1
            stats = oracle.strategy_stats_exact(SStar(f, costs, budget, mode="exact"))
            rows.append(_row("accuracy", f"{name} eps={eps} B={budget}", "error<2eps",
                             stats.error, 2 * eps, stats.error < 2 * eps))
    return rows


def suite_warmup(max_n=8, seed=0):
    rows = []
    for name, f, costs in _corpus(max_n, seed):
        inf = total_influence_exact(f)
        worst0 = oracle.opt_worst(f, costs, 0).value
        for eps in EPSILONS:
            stats = oracle.strategy_stats_exact(SDiamond(f, costs, eps, mode="exact"))
            bound = worst0 * inf / eps
            rows.append(_row("warmup", f"{name} eps={eps}", "cost<=bound",
                             stats.expected_cost, bound, stats.expected_cost <= bound))
            rows.append(_row("warmup", f"{name} eps={eps}", "error<=eps", stats.error, eps, stats.error <= eps))
    return rows


def suite_oracle(max_n=4, seed=0, count=30):
    rows = []
    rng = stream(seed, "oracle-suite")
    fixed = [bf.and_fn(2), bf.parity(3), bf.majority(3), bf.tribes(2, 2)]
    instances = [(f, [int(v) for v in rng.integers(1, 9, size=f.n)]) for f in fixed if f.n <= max_n]
    for _ in range(count):
        n = int(rng.integers(1, min(4, max_n) + 1))
        f = bf.from_table(n, (rng.random(1 << n) < rng.random()).astype(np.uint8))
        instances.append((f, [int(v) for v in rng.integers(1, 9, size=n)]))
    for f, costs in instances:
        name = f"{_label(f)} c={costs}"
        for k in range(3):
            exp_bf, worst_bf = oracle.brute_force_opt(f, costs, k)
            for result, brute in ((oracle.opt_expected(f, costs, k), exp_bf),
                                  (oracle.opt_worst(f, costs, k), worst_bf)):
                rows.append(_row("oracle", f"{name} k={k}", f"{result.objective}==enumeration",
                                 result.value, brute, result.value == brute))
                stats = oracle.strategy_stats_exact(result.witness, f, costs)
                got = stats.expected_cost if result.objective == "expected" else stats.worst_cost
                rows.append(_row("oracle", f"{name} k={k}", f"{result.objective} witness value",
                                 got, result.value, got == result.value and stats.misclassified <= k))
    return rows


def markov_truncation(f, costs, eps):
    """``(cutoff, base stats, truncated stats)`` for the expected-cost optimum cut at ``opt / eps``.

    A zero-cost optimum never queries, so it is its own truncation.
    """
    res = oracle.opt_expected_eps(f, costs, eps)
    base = oracle.strategy_stats_exact(res.witness, f, costs)
    cutoff = res.value / Fraction(eps)
    if res.value == 0:
        return cutoff, base, base
    cut = oracle.strategy_stats_exact(truncate_at_cost(TreeStrategy(f, costs, res.witness), cutoff))
    return cutoff, base, cut


def suite_markov(max_n=8, seed=0):
    rows = []
    for name, f, costs in _corpus(max_n, seed):
        for eps in EPSILONS:
            cutoff, base, cut = markov_truncation(f, costs, eps)
            inst = f"{name} eps={eps} cutoff={cutoff}"
            rows.append(_row("markov", inst, "worst<=cutoff", cut.worst_cost, cutoff, cut.worst_cost <= cutoff))
            rows.append(_row("markov", inst, "error<=base+eps", cut.error, base.error + eps,
                             cut.error <= base.error + eps))
    return rows


def run_suite(name, max_n=None, seed=0):
    runners = {
        "osss": lambda: suite_osss(max_n or 5, seed),
        "identities": lambda: suite_identities(max_n or 6, seed),
        "cost_lemma": lambda: suite_cost_lemma(max_n or 6, seed),
        "accuracy": lambda: suite_accuracy(max_n or 8, seed),
        "warmup": lambda: suite_warmup(max_n or 8, seed),
        "oracle": lambda: suite_oracle(max_n or 4, seed),
        "markov": lambda: suite_markov(max_n or 8, seed),
    }
    if name == "all":
        return list(itertools.chain.from_iterable(runners[s]() for s in SUITES))
    if name not in runners:
        raise InputError(f"unknown suite {name!r}; expected one of {', '.join(SUITES + ('all',))}")
    return runners[name]()
