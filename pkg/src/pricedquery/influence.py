"""Bias, coordinate influence and the cost-weighted-influence argmax.

Exact quantities are :class:`fractions.Fraction` values computed from integer
counts over the ``2**free`` consistent inputs. Estimated quantities are floats
from seeded uniform sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .boolfn import MAX_TABLE_ARITY, BoolFn, CostVector, Restriction
from .errors import InputError, StateError
from .rng import restriction_key, stream


@dataclass(frozen=True)
class InfluenceProfile:
    per_coordinate: tuple
    total: object
    mode: str = "exact"
    tau: float | None = None
    delta: float | None = None


@dataclass(frozen=True)
class Counts:
    """Integer summary of a (restricted) function over its consistent inputs."""

    ones: int
    size: int
    flips: tuple  # indexed by global coordinate; 0 for restricted ones

    @property
    def minority(self):
        return min(self.ones, self.size - self.ones)

    @property
    def majority_sign(self):
        return 1 if 2 * self.ones >= self.size else -1


def counts(f: BoolFn) -> Counts:
    table = f.table01()
    free = f.free
    flips = [0] * f.n
    if free:
        local = kernels.flip_counts(np.ascontiguousarray(table, dtype=np.uint8), len(free))
        for j, i in enumerate(free):
            flips[i] = int(local[j])
    return Counts(int(np.count_nonzero(table)), 1 << len(free), tuple(flips))


def bias_exact(f: BoolFn) -> Fraction:
    c = counts(f)
    return Fraction(c.minority, c.size)


def mean_exact(f: BoolFn) -> Fraction:
    c = counts(f)
    return Fraction(2 * c.ones - c.size, c.size)


def influence_exact(f: BoolFn, i) -> Fraction:
    if not 0 <= i < f.n:
        raise InputError(f"coordinate {i} outside arity {f.n}")
    c = counts(f)
    return Fraction(c.flips[i], c.size)


def influence_profile_exact(f: BoolFn) -> InfluenceProfile:
    c = counts(f)
    per = tuple(Fraction(v, c.size) for v in c.flips)
    return InfluenceProfile(per, sum(per, Fraction(0)))


def total_influence_exact(f: BoolFn) -> Fraction:
    c = counts(f)
    return Fraction(sum(c.flips), c.size)


def hoeffding_samples(tau, delta):
    """Samples so that an empirical mean of [0,1] variables is tau-close w.p. 1 - delta."""
    if not (0 < tau < 1 and 0 < delta < 1):
        raise InputError("tau and delta must lie in (0, 1)")
    return math.ceil(math.log(2 / delta) / (2 * tau * tau))


def _uniform_inputs(f: BoolFn, m, rng):
    X = rng.integers(0, 2, size=(m, f.n), dtype=np.uint8)
    for i, b in f.restriction:
        X[:, i] = b
    return X


def _flip_fraction(f, i, X):
    Y = X.copy()
    Y[:, i] ^= 1
    return float(np.mean(f.evaluate_batch(X) != f.evaluate_batch(Y)))


def influence_estimate(f: BoolFn, i, tau, delta, seed) -> float:
    """Fraction of ``hoeffding_samples(tau, delta)`` uniform inputs whose flip at ``i`` changes ``f``."""
    if not 0 <= i < f.n:
        raise InputError(f"coordinate {i} outside arity {f.n}")
    m = hoeffding_samples(tau, delta)
    if i in f.restriction:
        return 0.0
    rng = stream(seed, "influence", i)
    return _flip_fraction(f, i, _uniform_inputs(f, m, rng))


def influence_profile_estimate(f: BoolFn, tau, delta, seed, key=0) -> InfluenceProfile:
    """All coordinates from one shared sample, confidence union-bounded to ``delta / n``."""
    free = f.free
    per = [0.0] * f.n
    if free:
        m = hoeffding_samples(tau, delta / len(free))
        X = _uniform_inputs(f, m, stream(seed, "influence-profile", key))
        for i in free:
            per[i] = _flip_fraction(f, i, X)
    return InfluenceProfile(tuple(per), sum(per), "estimated", tau, delta)


def _argmax(scores_num, costs, free):
    """Lowest free index maximizing ``num_i / c_i``; compares by cross-multiplication."""
    best = None
    for i in free:
        if best is None or scores_num[i] * costs[best] > scores_num[best] * costs[i]:
            best = i
    return best


def argmax_cost_weighted_influence(f: BoolFn, c, mode="auto", tau=0.05, delta=0.05, seed=0,
                                   exact_threshold=MAX_TABLE_ARITY):
    """Free coordinate maximizing ``Inf_i(f) / c_i``; ties go to the lowest index."""
    c = CostVector(c).check_arity(f.n)
    free = f.free
    if not free:
        raise StateError("no free coordinate left to query")
    if mode == "auto":
        mode = "exact" if len(free) <= exact_threshold else "estimated"
    if mode == "exact":
        return _argmax(counts(f).flips, c, free)
    if mode == "estimated":
        return _argmax(influence_profile_estimate(f, tau, delta, seed).per_coordinate, c, free)
    raise InputError(f"unknown influence mode {mode!r}")


class ExactProfiler:
    """Memoized exact counts of ``f`` restricted by query histories."""

    mode = "exact"

    def __init__(self, f: BoolFn):
        self.f = f
        self._cache = {}

    def counts(self, alpha: Restriction) -> Counts:
        got = self._cache.get(alpha)
        if got is None:
            got = counts(self.f.restrict_all(alpha))
            self._cache[alpha] = got
        return got

    def free(self, alpha):
        fixed = alpha.as_dict()
        return tuple(i for i in self.f.free if i not in fixed)

    def bias(self, alpha):
        c = self.counts(alpha)
        return Fraction(c.minority, c.size)

    def sign(self, alpha):
        return self.counts(alpha).majority_sign

    def is_constant(self, alpha):
        return self.counts(alpha).minority == 0

    def argmax(self, alpha, costs):
        free = self.free(alpha)
        if not free:
            raise StateError("no free coordinate left to query")
        return _argmax(self.counts(alpha).flips, costs, free)


class EstimatedProfiler:
    """Sampling-based stand-in for :class:`ExactProfiler`.

    Estimates for a history ``alpha`` use a stream keyed by ``alpha`` itself,
    so the induced strategy is a fixed function of the query history.
    """

    mode = "estimated"

    def __init__(self, f: BoolFn, tau=0.05, delta=0.05, seed=0):
        self.f = f
        self.tau, self.delta, self.seed = tau, delta, seed
        self._cache = {}

    def _estimate(self, alpha):
        got = self._cache.get(alpha)
        if got is None:
            g = self.f.restrict_all(alpha)
            key = restriction_key(alpha)
            prof = influence_profile_estimate(g, self.tau, self.delta, self.seed, key)
            m = hoeffding_samples(self.tau, self.delta)
            X = _uniform_inputs(g, m, stream(self.seed, "mean", key))
            p_plus = float(np.mean(g.evaluate_batch(X) == 1))
            got = (prof.per_coordinate, p_plus)
            self._cache[alpha] = got
        return got

    def free(self, alpha):
        fixed = alpha.as_dict()
        return tuple(i for i in self.f.free if i not in fixed)

    def bias(self, alpha):
        p = self._estimate(alpha)[1]
        return min(p, 1 - p)

    def sign(self, alpha):
        return 1 if self._estimate(alpha)[1] >= 0.5 else -1

    def is_constant(self, alpha):
        return self.bias(alpha) == 0

    def argmax(self, alpha, costs):
        free = self.free(alpha)
        if not free:
            raise StateError("no free coordinate left to query")
        return _argmax(self._estimate(alpha)[0], costs, free)


def make_profiler(f: BoolFn, mode="auto", tau=0.05, delta=0.05, seed=0,
                  exact_threshold=MAX_TABLE_ARITY):
    if mode == "auto":
        mode = "exact" if len(f.free) <= exact_threshold else "estimated"
    if mode == "exact":
        return ExactProfiler(f)
    if mode == "estimated":
        return EstimatedProfiler(f, tau, delta, seed)
    raise InputError(f"unknown influence mode {mode!r}")
