"""Adaptive query strategies driven by cost-weighted influence.

A strategy is described by a single method, ``step(alpha, spent)``, that maps
the query history ``alpha`` and the cost paid so far to the next action. The
same description drives single-input runs (:meth:`Strategy.run`), vectorized
Monte Carlo (:func:`simulate`) and expansion into an explicit tree for exact
analysis (:meth:`Strategy.expand`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import trees
from .boolfn import BoolFn, CostVector, Restriction
from .errors import InputError, StateError
from .influence import ExactProfiler, make_profiler
from .rng import stream
from .stats import RunStats


# --------------------------------------------------------------------------
# Actions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Stop:
    out: int


@dataclass(frozen=True)
class Ask:
    coord: int


@dataclass(frozen=True)
class Final:
    """Query ``coord``, then output the majority sign of the restricted function."""

    coord: int


@dataclass(frozen=True)
class Lottery:
    p: Fraction
    taken: Union[Stop, Final]
    skipped: Union[Stop, Final]


@dataclass
class Transcript:
    steps: list = field(default_factory=list)  # (coord, bit, cumulative cost)
    lottery: tuple | None = None  # (p, "queried" | "skipped")
    output: int | None = None

    @property
    def cost(self):
        return self.steps[-1][2] if self.steps else 0

    @property
    def queried(self):
        return [s[0] for s in self.steps]


def _as_fraction(v):
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


def _take(u, p):
    """Lottery rule shared by single runs and batches: taken iff u < p."""
    return Fraction(u) < p


class Strategy:
    """Base class; subclasses implement :meth:`step`."""

    def __init__(self, f: BoolFn, costs, profiler=None):
        self.f = f
        self.costs = CostVector(costs).check_arity(f.n)
        self.profiler = profiler if profiler is not None else ExactProfiler(f)

    def step(self, alpha: Restriction, spent):
        raise NotImplementedError

    # single input ---------------------------------------------------------
    def run(self, x, seed=0, rng=None) -> Transcript:
        if len(x) != self.f.n:
            raise InputError(f"input has length {len(x)} but the function has arity {self.f.n}")
        rng = rng if rng is not None else stream(seed, "lottery")
        alpha = Restriction()
        spent = 0
        t = Transcript()
        while True:
            action = self.step(alpha, spent)
            if isinstance(action, Lottery):
                taken = _take(rng.random(), action.p)
                t.lottery = (action.p, "queried" if taken else "skipped")
                action = action.taken if taken else action.skipped
            if isinstance(action, Stop):
                t.output = action.out
                return t
            i = action.coord
            if i in alpha or i in self.f.restriction:
                raise StateError(f"strategy queried coordinate {i} twice")
            spent += self.costs[i]
            alpha = alpha.assign(i, int(x[i]))
            t.steps.append((i, int(x[i]), spent))
            if isinstance(action, Final):
                t.output = self.profiler.sign(alpha)
                return t

    # explicit tree ----------------------------------------------------------
    def expand(self, alpha=None, spent=0):
        """Explicit tree of the strategy (``Chance`` nodes for lotteries)."""
        alpha = alpha if alpha is not None else Restriction()
        return self._node(self.step(alpha, spent), alpha, spent)

    def _node(self, action, alpha, spent):
        if isinstance(action, Stop):
            return trees.Leaf(action.out)
        if isinstance(action, Lottery):
            return trees.Chance(action.p, self._node(action.taken, alpha, spent),
                                self._node(action.skipped, alpha, spent))
        i = action.coord
        paid = spent + self.costs[i]
        a0, a1 = alpha.assign(i, 0), alpha.assign(i, 1)
        if isinstance(action, Final):
            return trees.Query(i, trees.Leaf(self.profiler.sign(a0)), trees.Leaf(self.profiler.sign(a1)))
        return trees.Query(i, self.expand(a0, paid), self.expand(a1, paid))


class SStar(Strategy):
    """Budgeted greedy strategy with a boundary lottery.

    Repeatedly queries the free coordinate of largest ``Inf_i / c_i``. When
    paying for that coordinate would reach the budget, it is queried only with
    probability ``(B - spent) / c_i`` and the strategy halts either way, so the
    expected cost on every input is exactly ``min(B, sum(c))``.
    """

    def __init__(self, f, costs, budget, mode="auto", early_stop_on_constant=False,
                 tau=0.05, delta=0.05, seed=0):
        budget = _as_fraction(budget)
        if budget < 0:
            raise InputError("budget must be non-negative")
        super().__init__(f, costs, make_profiler(f, mode, tau, delta, seed))
        self.budget = budget
        self.early_stop_on_constant = early_stop_on_constant

    def step(self, alpha, spent):
        prof = self.profiler
        if spent >= self.budget or not prof.free(alpha):
            return Stop(prof.sign(alpha))
        if self.early_stop_on_constant and prof.is_constant(alpha):
            return Stop(prof.sign(alpha))
        i = prof.argmax(alpha, self.costs)
        c = self.costs[i]
        if spent + c >= self.budget:
            return Lottery((self.budget - spent) / c, Final(i), Stop(prof.sign(alpha)))
        return Ask(i)


class SDiamond(Strategy):
    """Greedy strategy that stops once the restricted function has bias <= eps."""

    def __init__(self, f, costs, eps, mode="auto", tau=0.05, delta=0.05, seed=0):
        eps = _as_fraction(eps)
        if not 0 < eps < Fraction(1, 2):
            raise InputError("eps must lie in (0, 1/2)")
        super().__init__(f, costs, make_profiler(f, mode, tau, delta, seed))
        self.eps = eps

    def step(self, alpha, spent):
        prof = self.profiler
        if prof.bias(alpha) <= self.eps:
            return Stop(prof.sign(alpha))
        return Ask(prof.argmax(alpha, self.costs))


class TreeStrategy(Strategy):
    """Executes a deterministic tree, using the tree's own leaf labels."""

    def __init__(self, f, costs, tree):
        if not trees.is_deterministic(tree):
            raise InputError("TreeStrategy needs a deterministic tree")
        trees.validate(tree, f.n, frozenset(i for i, _ in f.restriction))
        super().__init__(f, costs)
        self.tree = tree

    def step(self, alpha, spent):
        node = self.tree
        while isinstance(node, trees.Query):
            b = alpha.get(node.coord)
            if b is None:
                return Ask(node.coord)
            node = node.child(b)
        return Stop(node.out)

    def expand(self, alpha=None, spent=0):
        if alpha is None or not len(alpha):
            return self.tree
        return super().expand(alpha, spent)


class Truncated(Strategy):
    """Outputs +1 instead of making any query that would push cost above ``cutoff``."""

    def __init__(self, inner: Strategy, cutoff, fill=1):
        cutoff = _as_fraction(cutoff)
        if cutoff <= 0:
            raise InputError("cutoff must be positive")
        super().__init__(inner.f, inner.costs, inner.profiler)
        self.inner = inner
        self.cutoff = cutoff
        self.fill = fill

    def _clip(self, action, spent):
        if isinstance(action, (Ask, Final)) and spent + self.costs[action.coord] > self.cutoff:
            return Stop(self.fill)
        if isinstance(action, Lottery):
            return Lottery(action.p, self._clip(action.taken, spent), self._clip(action.skipped, spent))
        return action

    def step(self, alpha, spent):
        return self._clip(self.inner.step(alpha, spent), spent)


def truncate_at_cost(S: Strategy, cutoff) -> Truncated:
    return Truncated(S, cutoff)


def run_s_star_b(f, c, B, x, seed=0, mode="auto", early_stop_on_constant=False) -> Transcript:
    return SStar(f, c, B, mode=mode, early_stop_on_constant=early_stop_on_constant, seed=seed).run(x, seed)


def run_s_diamond(f, c, eps, x, mode="auto") -> Transcript:
    return SDiamond(f, c, eps, mode=mode).run(x)


# --------------------------------------------------------------------------
# Strategy configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StrategyConfig:
    kind: str  # "s_star" | "s_diamond" | "truncated"
    budget: object = None
    eps: object = None
    inner: "StrategyConfig | None" = None
    cutoff: object = None
    mode: str = "auto"
    tau: float = 0.05
    delta: float = 0.05
    early_stop_on_constant: bool = False
    seed: int = 0

    def build(self, f, costs) -> Strategy:
        if self.kind == "s_star":
            if self.budget is None:
                raise InputError("s_star needs a budget")
            return SStar(f, costs, self.budget, self.mode, self.early_stop_on_constant,
                         self.tau, self.delta, self.seed)
        if self.kind == "s_diamond":
            return SDiamond(f, costs, self.eps, self.mode, self.tau, self.delta, self.seed)
        if self.kind == "truncated":
            if self.inner is None or self.cutoff is None:
                raise InputError("truncated needs an inner config and a cutoff")
            return Truncated(self.inner.build(f, costs), self.cutoff)
        raise InputError(f"unknown strategy kind {self.kind!r}")


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------

@dataclass
class Simulation:
    outputs: np.ndarray
    costs: np.ndarray
    queried: np.ndarray  # (m, n) bool
    truth: np.ndarray


def sample_inputs(f: BoolFn, m, rng):
    X = rng.integers(0, 2, size=(m, f.n), dtype=np.uint8)
    for i, b in f.restriction:
        X[:, i] = b
    return X


def simulate(S: Strategy, X, U):
    """Run ``S`` on every row of ``X``; ``U[r]`` is row r's lottery uniform.

    Rows sharing a query history are processed together, so the work is
    proportional to the number of distinct histories visited.
    """
    X = np.asarray(X, dtype=np.uint8)
    m, n = X.shape
    outputs = np.zeros(m, dtype=np.int8)
    costs = np.zeros(m, dtype=np.float64)
    queried = np.zeros((m, n), dtype=bool)
    c = S.costs

    def pay(rows, i, spent):
        queried[rows, i] = True
        costs[rows] = float(spent + c[i])

    def act(action, alpha, spent, rows):
        if rows.size == 0:
            return
        if isinstance(action, Stop):
            outputs[rows] = action.out
            costs[rows] = float(spent)
            return
        if isinstance(action, Lottery):
            hit = U[rows] < float(action.p)
            act(action.taken, alpha, spent, rows[hit])
            act(action.skipped, alpha, spent, rows[~hit])
            return
        i = action.coord
        pay(rows, i, spent)
        bits = X[rows, i].astype(bool)
        for b, sub in ((0, rows[~bits]), (1, rows[bits])):
            if sub.size == 0:
                continue
            child = alpha.assign(i, b)
            if isinstance(action, Final):
                outputs[sub] = S.profiler.sign(child)
            else:
                act(S.step(child, spent + c[i]), child, spent + c[i], sub)

    root = Restriction()
    act(S.step(root, 0), root, 0, np.arange(m))
    return Simulation(outputs, costs, queried, S.f.evaluate_batch(X))


def estimate_strategy_stats(S: Strategy, m, seed=0) -> RunStats:
    """Monte Carlo error, expected cost and query probabilities from ``m`` seeded runs."""
    if m < 1:
        raise InputError("sample count must be >= 1")
    X = sample_inputs(S.f, m, stream(seed, "inputs"))
    U = stream(seed, "lottery").random(m)
    sim = simulate(S, X, U)
    wrong = (sim.outputs != sim.truth).astype(np.float64)
    root_m = math.sqrt(m)

    def se(v):
        return float(v.std(ddof=1) / root_m) if m > 1 else float("inf")

    q = sim.queried.astype(np.float64)
    return RunStats(
        error=float(wrong.mean()),
        expected_cost=float(sim.costs.mean()),
        query_prob=tuple(float(v) for v in q.mean(axis=0)),
        worst_cost=float(sim.costs.max()),
        misclassified=int(wrong.sum()),
        samples=m,
        error_se=se(wrong),
        cost_se=se(sim.costs),
        query_prob_se=tuple(se(q[:, i]) for i in range(q.shape[1])),
    )


# --------------------------------------------------------------------------
# Budget search
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BudgetSearch:
    budget: Fraction
    error: float
    doublings: int
    samples: int
    strategy: SStar
    history: tuple  # ((budget, estimated error), ...)


def budget_samples(eps, delta):
    """Samples separating error <= eps/2 from >= 3eps/2 with confidence 1 - delta."""
    return math.ceil(math.log(2 / delta) / (2 * (eps / 4) ** 2))


def find_budget(f: BoolFn, c, eps, m=None, delta=0.05, seed=0, mode="auto",
                early_stop_on_constant=False) -> BudgetSearch:
    """Try budgets ``2**i * min(c)`` for i = 1, 2, ... until the estimated error is below ``eps``.

    Each candidate is scored on ``m`` fresh uniform inputs with fresh lottery
    randomness. Budgets at or beyond ``sum(c)`` evaluate ``f`` exactly, so the
    search always stops there.
    """
    if not 0 < eps < 0.5:
        raise InputError("eps must lie in (0, 1/2)")
    costs = CostVector(c).check_arity(f.n)
    m = m if m is not None else budget_samples(eps, delta)
    history = []
    i = 0
    while True:
        i += 1
        B = Fraction(2 ** i * min(costs))
        S = SStar(f, costs, B, mode=mode, early_stop_on_constant=early_stop_on_constant, seed=seed)
        X = sample_inputs(f, m, stream(seed, "inputs", i))
        U = stream(seed, "lottery", i).random(m)
        sim = simulate(S, X, U)
        err = float(np.mean(sim.outputs != sim.truth))
        history.append((B, err))
        if err < eps or B >= costs.total:
            return BudgetSearch(B, err, i, m, S, tuple(history))
