"""Exact optimal strategies and exact strategy statistics on small instances.

Error budgets are integer counts ``k`` of misclassified inputs among the
``2**free`` consistent inputs; an error probability ``eps`` corresponds to
``k = floor(eps * 2**free)``. The oracle optimizes over deterministic trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels, trees
from .boolfn import BoolFn, CostVector, Restriction
from .errors import CapacityError, InputError, UnsupportedRandomnessError
from .influence import ExactProfiler, total_influence_exact
from .stats import RunStats

MAX_FREE_ZERO_ERROR = 14
MAX_FREE_WITH_ERROR = 10
MAX_FREE_BRUTE_FORCE = 4


@dataclass(frozen=True)
class OptResult:
    value: Fraction
    witness: trees.Tree
    objective: str  # "expected" | "worst"
    k: int


def errors_allowed(f: BoolFn, eps) -> int:
    """Largest misclassification count with error probability at most ``eps``."""
    eps = Fraction(repr(eps)) if isinstance(eps, float) else Fraction(eps)
    if eps < 0:
        raise InputError("eps must be non-negative")
    size = 1 << len(f.free)
    return (eps.numerator * size) // eps.denominator


class _Subcubes:
    """Base-3 subcube indexing over the free coordinates of ``f``."""

    def __init__(self, f: BoolFn):
        self.free = f.free
        self.d = len(self.free)
        self.ones = np.asarray(kernels.subcube_ones(np.ascontiguousarray(f.table01(), dtype=np.uint8), self.d))
        self.p3 = [3 ** j for j in range(self.d)]
        self.root = 3 ** self.d - 1

    def digits(self, idx):
        out = []
        for _ in range(self.d):
            idx, r = divmod(idx, 3)
            out.append(r)
        return out

    def size(self, idx):
        return 1 << sum(1 for v in self.digits(idx) if v == 2)

    def minority(self, idx):
        o = int(self.ones[idx])
        return min(o, self.size(idx) - o)

    def majority(self, idx):
        return 1 if 2 * int(self.ones[idx]) >= self.size(idx) else -1


def _solve(f: BoolFn, c, k, objective):
    c = CostVector(c).check_arity(f.n)
    if k < 0:
        raise InputError("error budget k must be non-negative")
    d = len(f.free)
    limit = MAX_FREE_ZERO_ERROR if k == 0 else MAX_FREE_WITH_ERROR
    if d > limit:
        raise CapacityError(f"{d} free coordinates exceed the oracle limit of {limit} for k = {k}")
    worst = objective == "worst"
    cubes = _Subcubes(f)
    kk = min(k, cubes.minority(cubes.root))
    local_costs = np.asarray([c[i] for i in cubes.free], dtype=np.int64)
    V = kernels.opt_table(cubes.ones, d, local_costs, kk, worst) if d else np.zeros((1, kk + 1), np.int64)

    def extract(idx, budget):
        if cubes.minority(idx) <= budget:
            return trees.Leaf(cubes.majority(idx))
        target = int(V[idx, budget])
        digits = cubes.digits(idx)
        nfree = sum(1 for v in digits if v == 2)
        for j in range(d):
            if digits[j] != 2:
                continue
            ch0, ch1 = idx - 2 * cubes.p3[j], idx - cubes.p3[j]
            step = int(local_costs[j]) if worst else int(local_costs[j]) << nfree
            for k0 in range(budget + 1):
                a, b = int(V[ch0, k0]), int(V[ch1, budget - k0])
                val = step + (max(a, b) if worst else a + b)
                if val == target:
                    return trees.Query(cubes.free[j], extract(ch0, k0), extract(ch1, budget - k0))
        raise AssertionError("optimal table is inconsistent")

    raw = int(V[cubes.root, kk])
    value = Fraction(raw) if worst else Fraction(raw, 1 << d)
    return OptResult(value, extract(cubes.root, kk), objective, k)


def opt_expected(f: BoolFn, c, k=0) -> OptResult:
    """Minimum expected cost over deterministic trees misclassifying at most ``k`` inputs."""
    return _solve(f, c, k, "expected")


def opt_worst(f: BoolFn, c, k=0) -> OptResult:
    """Minimum worst-case cost over deterministic trees misclassifying at most ``k`` inputs."""
    return _solve(f, c, k, "worst")


def opt_expected_eps(f, c, eps):
    return opt_expected(f, c, errors_allowed(f, eps))


def opt_worst_eps(f, c, eps):
    return opt_worst(f, c, errors_allowed(f, eps))


def _resolve(S, f, c):
    if isinstance(S, (trees.Leaf, trees.Query, trees.Chance)):
        if f is None or c is None:
            raise InputError("a bare tree needs the function and the cost vector")
        return S, f, CostVector(c).check_arity(f.n)
    expand = getattr(S, "expand", None)
    if expand is None:
        raise UnsupportedRandomnessError(
            f"cannot compute exact statistics for {type(S).__name__}; "
            "only trees and step-described strategies are supported")
    return expand(), S.f, S.costs


def strategy_stats_exact(S, f: BoolFn | None = None, c=None) -> RunStats:
    """Exact error, expected/worst cost, query probabilities and average leaf influence.

    ``S`` is a tree (``Chance`` nodes allowed) or a strategy object with an
    ``expand`` method; lottery branches are weighted analytically.
    """
    tree, f, c = _resolve(S, f, c)
    trees.validate(tree, f.n, frozenset(i for i, _ in f.restriction))
    prof = ExactProfiler(f)
    n = f.n
    acc = {"err": Fraction(0), "cost": Fraction(0), "avg": Fraction(0), "worst": 0}
    delta = [Fraction(0)] * n

    def walk(node, alpha, w, spent):
        if isinstance(node, trees.Leaf):
            cnt = prof.counts(alpha)
            wrong = cnt.size - cnt.ones if node.out == 1 else cnt.ones
            acc["err"] += w * Fraction(wrong, cnt.size)
            acc["cost"] += w * spent
            acc["avg"] += w * Fraction(sum(cnt.flips), cnt.size)
            if w > 0 and spent > acc["worst"]:
                acc["worst"] = spent
            return
        if isinstance(node, trees.Chance):
            walk(node.taken, alpha, w * node.p, spent)
            walk(node.skipped, alpha, w * (1 - node.p), spent)
            return
        i = node.coord
        delta[i] += w
        half = w / 2
        walk(node.child0, alpha.assign(i, 0), half, spent + c[i])
        walk(node.child1, alpha.assign(i, 1), half, spent + c[i])

    walk(tree, Restriction(), Fraction(1), 0)
    scaled = acc["err"] * (1 << len(f.free))
    return RunStats(
        error=acc["err"],
        expected_cost=acc["cost"],
        query_prob=tuple(delta),
        avg_influence=acc["avg"],
        worst_cost=acc["worst"],
        misclassified=int(scaled) if scaled.denominator == 1 else None,
    )


def tree_signatures(f: BoolFn, c):
    """(errors, 2**free * expected cost, worst cost) for every query structure over ``f``'s free coordinates.

    Leaves are labelled with the majority sign, which minimizes errors without
    changing cost, so these cover every tree that could be optimal. The list
    has one entry per structure (238145 for four free coordinates).
    """
    c = CostVector(c).check_arity(f.n)
    free = f.free
    if len(free) > MAX_FREE_BRUTE_FORCE:
        raise CapacityError(f"brute force is limited to {MAX_FREE_BRUTE_FORCE} free coordinates")
    prof = ExactProfiler(f)
    memo = {}

    def sigs(alpha):
        got = memo.get(alpha)
        if got is not None:
            return got
        cnt = prof.counts(alpha)
        out = [(cnt.minority, 0, 0)]
        scale = cnt.size
        for i in free:
            if i in alpha:
                continue
            left, right = sigs(alpha.assign(i, 0)), sigs(alpha.assign(i, 1))
            ci = c[i]
            out.extend((e0 + e1, ci * scale + x0 + x1, ci + (w0 if w0 > w1 else w1))
                       for e0, x0, w0 in left for e1, x1, w1 in right)
        memo[alpha] = out
        return out

    return sigs(Restriction())


def brute_force_opt(f: BoolFn, c, k=0):
    """``(opt_expected, opt_worst)`` by direct enumeration of every tree; tiny instances only."""
    sigs = tree_signatures(f, c)
    size = 1 << len(f.free)
    feasible = [(x, w) for e, x, w in sigs if e <= k]
    return Fraction(min(x for x, _ in feasible), size), Fraction(min(w for _, w in feasible))


def budget_from_worst_opt(f: BoolFn, c, eps) -> Fraction:
    """``opt_worst_eps(f, c, eps) * Inf(f) / eps``; budgets strictly above it give error below ``2 * eps``."""
    eps = Fraction(repr(eps)) if isinstance(eps, float) else Fraction(eps)
    return opt_worst_eps(f, c, eps).value * total_influence_exact(f) / eps


def budget_from_expected_opt(f: BoolFn, c, eps) -> Fraction:
    """``opt_expected_eps(f, c, eps) * Inf(f) / eps**2``, the budget paired with the expected-cost optimum."""
    eps = Fraction(repr(eps)) if isinstance(eps, float) else Fraction(eps)
    return opt_expected_eps(f, c, eps).value * total_influence_exact(f) / eps ** 2
