"""Seeded generators for test functions and cost vectors.

Random models (not canonical, documented here):

* ``random_dnf``: each of ``t`` terms picks ``w`` distinct coordinates
  uniformly and negates each with probability 1/2; the monotone variant never
  negates.
* ``halfspace``: integer weights uniform in ``[-W, W]``, threshold uniform
  over the integers that leave both output values reachable.
* ``intersection``: ``m`` independent halfspaces as above.
* ``addressing(k)``: the first ``k`` coordinates address one of ``2**k`` data
  coordinates; output +1 iff the addressed bit is 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import boolfn as bf
from . import trees
from .boolfn import CostVector
from .errors import InputError
from .rng import stream

FUNCTION_KINDS = ("and", "or", "parity", "dictator", "majority", "tribes", "random_dnf",
                  "random_monotone_dnf", "halfspace", "intersection", "addressing", "random_table")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0

    def label(self):
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        head = f"{self.kind}(n={self.n}" + (f",{inner}" if inner else "") + ")"
        return head if self.kind not in _RANDOM else f"{head}#{self.seed}"


_RANDOM = {"random_dnf", "random_monotone_dnf", "halfspace", "intersection", "random_table"}


def _need_n(spec):
    if spec.n is None or spec.n < 1:
        raise InputError(f"{spec.kind} needs a positive arity n")
    return spec.n


def _random_terms(n, t, w, rng, monotone):
    if not 1 <= w <= n or t < 1:
        raise InputError(f"need 1 <= w <= n and t >= 1 (got n={n}, t={t}, w={w})")
    terms = []
    for _ in range(t):
        coords = rng.choice(n, size=w, replace=False) + 1
        signs = np.ones(w, dtype=int) if monotone else rng.choice([-1, 1], size=w)
        terms.append(sorted((int(v) for v in coords * signs), key=abs))
    return terms


def _random_halfspace(n, W, rng):
    if W < 1:
        raise InputError("weight bound must be >= 1")
    w = rng.integers(-W, W + 1, size=n)
    lo = int(w[w < 0].sum())
    hi = int(w[w > 0].sum())
    # theta in (lo, hi] keeps both outputs reachable: x = 0 on positive weights gives lo < theta
    theta = int(rng.integers(lo + 1, hi + 1)) if hi > lo else hi
    return bf.Halfspace(n, [int(v) for v in w], theta)


def _addressing_tree(k):
    def build(depth, address):
        if depth == k:
            data = k + address
            return trees.Query(data, trees.Leaf(-1), trees.Leaf(1))
        return trees.Query(depth, build(depth + 1, address), build(depth + 1, address | (1 << depth)))

    return build(0, 0)


def generate_function(spec: GeneratorSpec) -> bf.BoolFn:
    kind, p = spec.kind, spec.params
    rng = stream(spec.seed, "corpus", FUNCTION_KINDS.index(kind) if kind in FUNCTION_KINDS else 0)
    if kind == "and":
        return bf.and_fn(_need_n(spec))
    if kind == "or":
        return bf.or_fn(_need_n(spec))
    if kind == "parity":
        return bf.parity(_need_n(spec))
    if kind == "majority":
        return bf.majority(_need_n(spec))
    if kind == "dictator":
        return bf.dictator(_need_n(spec), p.get("i", 0))
    if kind == "tribes":
        f = bf.tribes(p["w"], p["s"])
        if spec.n is not None and spec.n != f.n:
            raise InputError(f"tribes({p['w']},{p['s']}) has arity {f.n}, not {spec.n}")
        return f
    if kind in ("random_dnf", "random_monotone_dnf"):
        n = _need_n(spec)
        terms = _random_terms(n, p["t"], p["w"], rng, kind == "random_monotone_dnf")
        return bf.dnf(n, terms)
    if kind == "halfspace":
        n = _need_n(spec)
        return bf.BoolFn(_random_halfspace(n, p.get("W", 3), rng))
    if kind == "intersection":
        n = _need_n(spec)
        hs = [_random_halfspace(n, p.get("W", 3), rng) for _ in range(p["m"])]
        return bf.intersection(n, hs)
    if kind == "addressing":
        k = p["k"]
        if k < 1:
            raise InputError("addressing needs k >= 1")
        return bf.from_tree(k + (1 << k), _addressing_tree(k))
    if kind == "random_table":
        n = _need_n(spec)
        if n > bf.MAX_TABLE_ARITY:
            raise InputError("random tables are limited to 20 coordinates")
        density = p.get("density", 0.5)
        return bf.from_table(n, (rng.random(1 << n) < density).astype(np.uint8))
    raise InputError(f"unknown generator kind {kind!r}")


COST_KINDS = ("unit", "uniform", "power_law", "spike")


def generate_costs(kind, n, seed=0, M=8, j=0, factor=10) -> CostVector:
    """Cost vectors: ``unit``; ``uniform`` on 1..M; ``power_law`` with P(c) ~ 1/c**2 on 1..M;
    ``spike``: unit costs except coordinate ``j`` costs ``factor``."""
    if n < 1:
        raise InputError("n must be positive")
    rng = stream(seed, "costs", COST_KINDS.index(kind) if kind in COST_KINDS else 0)
    if kind == "unit":
        return CostVector([1] * n)
    if kind == "uniform":
        if M < 1:
            raise InputError("M must be >= 1")
        return CostVector(rng.integers(1, M + 1, size=n).tolist())
    if kind == "power_law":
        if M < 1:
            raise InputError("M must be >= 1")
        support = np.arange(1, M + 1)
        probs = 1.0 / support ** 2
        return CostVector(rng.choice(support, size=n, p=probs / probs.sum()).tolist())
    if kind == "spike":
        if not 0 <= j < n or factor < 1:
            raise InputError("spike needs 0 <= j < n and factor >= 1")
        costs = [1] * n
        costs[j] = int(factor)
        return CostVector(costs)
    raise InputError(f"unknown cost kind {kind!r}")


def small_corpus(seed=0):
    """Instances with n <= 8: tribes(2,2), majority(3), a dictator, 10 random
    3-term DNFs and 5 random halfspaces."""
    specs = [
        GeneratorSpec("tribes", None, {"w": 2, "s": 2}),
        GeneratorSpec("majority", 3),
        GeneratorSpec("dictator", 4, {"i": 1}),
    ]
    for r in range(10):
        specs.append(GeneratorSpec("random_dnf", 5 + r % 4, {"t": 3, "w": 2 + r % 2}, seed * 1000 + r))
    for r in range(5):
        specs.append(GeneratorSpec("halfspace", 4 + r, {"W": 4}, seed * 1000 + 100 + r))
    return specs


def corpus_instances(seed=0, cost_kind="uniform", M=4):
    """``(spec, f, costs)`` triples over :func:`small_corpus`; each instance gets its own cost draw."""
    out = []
    for idx, spec in enumerate(small_corpus(seed)):
        f = generate_function(spec)
        costs = generate_costs(cost_kind, f.n, seed=seed * 7919 + idx, M=M)
        out.append((spec, f, costs))
    return out
