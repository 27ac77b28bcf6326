"""Exact checks of influence inequalities and identities for strategies.

Each check returns an :class:`InequalityReport` computed in rational
arithmetic. These relations are theorems, so ``holds == False`` means a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import trees
from .boolfn import BoolFn, CostVector, Restriction, all_inputs
from .errors import CapacityError, InputError
from .influence import ExactProfiler, bias_exact, influence_profile_exact, total_influence_exact
from .oracle import _resolve, strategy_stats_exact

MAX_CHECK_ARITY = 12


@dataclass(frozen=True)
class InequalityReport:
    """``lhs <= rhs`` (or ``lhs == rhs`` for identities)."""

    name: str
    lhs: Fraction
    rhs: Fraction
    equality: bool = False
    witness_coordinate: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self):
        ok = self.slack == 0 if self.equality else self.slack >= 0
        return ok and all(v for k, v in self.details.items() if k.endswith("_holds"))


def _check_size(f, limit=MAX_CHECK_ARITY):
    if f.n > limit:
        raise CapacityError(f"arity {f.n} exceeds the check limit of {limit}")


def osss_check(f: BoolFn, S) -> InequalityReport:
    """bias(f) - error_f(S) <= sum_i delta_i(S) * Inf_i(f)."""
    _check_size(f)
    stats = strategy_stats_exact(S, f, [1] * f.n) if _is_tree(S) else strategy_stats_exact(S)
    infl = influence_profile_exact(f).per_coordinate
    lhs = bias_exact(f) - stats.error
    rhs = sum((d * v for d, v in zip(stats.query_prob, infl)), Fraction(0))
    return InequalityReport("osss", lhs, rhs)


def cost_osss_witness(f: BoolFn, c, S) -> InequalityReport:
    """Some coordinate has Inf_i(f) / c_i >= (bias(f) - error_f(S)) / Delta_c(S)."""
    _check_size(f)
    c = CostVector(c).check_arity(f.n)
    stats = strategy_stats_exact(S, f, c) if _is_tree(S) else strategy_stats_exact(S)
    if stats.expected_cost == 0:
        raise InputError("the strategy makes no queries, so its expected cost is zero")
    infl = influence_profile_exact(f).per_coordinate
    best = max(range(f.n), key=lambda i: (infl[i] / c[i], -i))
    lhs = (bias_exact(f) - stats.error) / stats.expected_cost
    return InequalityReport("cost_osss", lhs, infl[best] / c[best], witness_coordinate=best)


def influence_split_check(f: BoolFn, i) -> InequalityReport:
    """Inf(f) == Inf_i(f) + (Inf(f_{x_i=0}) + Inf(f_{x_i=1})) / 2."""
    _check_size(f)
    if i in f.restriction or not 0 <= i < f.n:
        raise InputError(f"coordinate {i} is not a free coordinate")
    prof = influence_profile_exact(f)
    rhs = prof.per_coordinate[i] + (total_influence_exact(f.restrict(i, 0))
                                    + total_influence_exact(f.restrict(i, 1))) / 2
    return InequalityReport("influence_split", prof.total, rhs, equality=True)


def path_influence(f: BoolFn, tree) -> Fraction:
    """E_x[ sum over the path of Inf_{query}(f_alpha) ], weighting lottery branches."""
    prof = ExactProfiler(f)

    def walk(node, alpha, w):
        if isinstance(node, trees.Leaf):
            return Fraction(0)
        if isinstance(node, trees.Chance):
            return walk(node.taken, alpha, w * node.p) + walk(node.skipped, alpha, w * (1 - node.p))
        cnt = prof.counts(alpha)
        here = w * Fraction(cnt.flips[node.coord], cnt.size)
        return (here + walk(node.child0, alpha.assign(node.coord, 0), w / 2)
                + walk(node.child1, alpha.assign(node.coord, 1), w / 2))

    return walk(tree, Restriction(), Fraction(1))


def is_f_consistent(f: BoolFn, tree) -> bool:
    prof = ExactProfiler(f)
    for path, leaf in trees.iter_leaves(tree):
        if leaf.out != prof.sign(Restriction(path)):
            return False
    return True


def make_consistent(f: BoolFn, tree):
    """Relabel every leaf with the majority sign of its subcube."""
    prof = ExactProfiler(f)

    def walk(node, alpha):
        if isinstance(node, trees.Leaf):
            return trees.Leaf(prof.sign(alpha))
        if isinstance(node, trees.Chance):
            return trees.Chance(node.p, walk(node.taken, alpha), walk(node.skipped, alpha))
        return trees.Query(node.coord, walk(node.child0, alpha.assign(node.coord, 0)),
                           walk(node.child1, alpha.assign(node.coord, 1)))

    return walk(tree, Restriction())


def avg_influence_identity_check(f: BoolFn, S) -> InequalityReport:
    """AvgInf_f(S) == Inf(f) - E_x[path influence]; also error <= AvgInf for f-consistent S."""
    _check_size(f, 10)
    tree = S if _is_tree(S) else S.expand()
    stats = strategy_stats_exact(tree, f, [1] * f.n)
    rhs = total_influence_exact(f) - path_influence(f, tree)
    details = {}
    if trees.is_deterministic(tree) and is_f_consistent(f, tree):
        details["error_bound_holds"] = stats.error <= stats.avg_influence
    return InequalityReport("avg_influence", stats.avg_influence, rhs, equality=True, details=details)


def per_input_cost(f: BoolFn, c, S):
    """Expected cost on each of the 2**n inputs (lottery averaged), by direct execution."""
    tree, f, c = _resolve(S, f, c)

    def cost(node, x, spent):
        if isinstance(node, trees.Leaf):
            return Fraction(spent)
        if isinstance(node, trees.Chance):
            return node.p * cost(node.taken, x, spent) + (1 - node.p) * cost(node.skipped, x, spent)
        return cost(node.child(x[node.coord]), x, spent + c[node.coord])

    X = all_inputs(f.n)
    return [cost(tree, x, 0) for x in X if f.restriction.consistent(x)]


def delta_cost_identity_check(f: BoolFn, c, S) -> InequalityReport:
    """sum_i delta_i(S) c_i == E_x[cost_c(S, x)], the right side by per-input execution."""
    _check_size(f, 16)
    c = CostVector(c).check_arity(f.n)
    stats = strategy_stats_exact(S, f, c) if _is_tree(S) else strategy_stats_exact(S)
    lhs = sum((d * ci for d, ci in zip(stats.query_prob, c)), Fraction(0))
    per = per_input_cost(f, c, S)
    return InequalityReport("delta_cost", lhs, sum(per, Fraction(0)) / len(per), equality=True)


def _is_tree(S):
    return isinstance(S, (trees.Leaf, trees.Query, trees.Chance))
