"""Explicit strategy trees.

A deterministic strategy is a binary decision tree made of :class:`Query`
and :class:`Leaf` nodes. :class:`Chance` nodes appear only when a randomized
strategy is expanded for exact analysis; each one splits into two
sub-strategies taken with probability ``p`` and ``1 - p``.

Coordinates are 0-based in Python. The JSON form uses 1-based coordinates::

    {"q": 1, "0": {"out": -1}, "1": {"q": 2, "0": {"out": -1}, "1": {"out": 1}}}
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .errors import InputError, SpecError


@dataclass(frozen=True)
class Leaf:
    out: int

    def __post_init__(self):
        if self.out not in (1, -1):
            raise InputError(f"leaf output must be +1 or -1, got {self.out!r}")


@dataclass(frozen=True)
class Query:
    coord: int
    child0: "Tree"
    child1: "Tree"

    def child(self, bit):
        return self.child1 if bit else self.child0


@dataclass(frozen=True)
class Chance:
    p: Fraction
    taken: "Tree"
    skipped: "Tree"

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise InputError(f"chance probability must lie in [0, 1], got {self.p}")


Tree = Union[Leaf, Query, Chance]


def is_deterministic(tree):
    if isinstance(tree, Leaf):
        return True
    if isinstance(tree, Chance):
        return False
    return is_deterministic(tree.child0) and is_deterministic(tree.child1)


def validate(tree, n, fixed=frozenset()):
    """Check that no coordinate repeats along a path and all lie in ``range(n)``.

    ``fixed`` holds coordinates that may not be queried at all (already
    restricted in the function the tree runs against).
    """
    if isinstance(tree, Leaf):
        return
    if isinstance(tree, Chance):
        validate(tree.taken, n, fixed)
        validate(tree.skipped, n, fixed)
        return
    if not 0 <= tree.coord < n:
        raise InputError(f"tree queries coordinate {tree.coord} outside arity {n}")
    if tree.coord in fixed:
        raise InputError(f"tree queries coordinate {tree.coord} twice on one path")
    inner = fixed | {tree.coord}
    validate(tree.child0, n, inner)
    validate(tree.child1, n, inner)


def evaluate(tree, x):
    """Output of a deterministic tree on the full assignment ``x``."""
    node = tree
    while isinstance(node, Query):
        node = node.child(x[node.coord])
    if isinstance(node, Chance):
        raise InputError("cannot evaluate a randomized tree deterministically")
    return node.out


def evaluate_batch(tree, X):
    """Vectorized :func:`evaluate` over the rows of a 0/1 matrix."""
    out = np.empty(X.shape[0], dtype=np.int8)

    def walk(node, rows):
        if rows.size == 0:
            return
        if isinstance(node, Leaf):
            out[rows] = node.out
            return
        if isinstance(node, Chance):
            raise InputError("cannot evaluate a randomized tree deterministically")
        bits = X[rows, node.coord].astype(bool)
        walk(node.child0, rows[~bits])
        walk(node.child1, rows[bits])

    walk(tree, np.arange(X.shape[0]))
    return out


def depth(tree):
    if isinstance(tree, Leaf):
        return 0
    if isinstance(tree, Chance):
        return max(depth(tree.taken), depth(tree.skipped))
    return 1 + max(depth(tree.child0), depth(tree.child1))


def size(tree):
    """Number of leaves."""
    if isinstance(tree, Leaf):
        return 1
    if isinstance(tree, Chance):
        return size(tree.taken) + size(tree.skipped)
    return size(tree.child0) + size(tree.child1)


def iter_leaves(tree, path=()):
    """Yield ``(path, leaf)`` for a deterministic tree; a path is a tuple of (coord, bit)."""
    if isinstance(tree, Leaf):
        yield path, tree
        return
    if isinstance(tree, Chance):
        raise InputError("iter_leaves needs a deterministic tree")
    yield from iter_leaves(tree.child0, path + ((tree.coord, 0),))
    yield from iter_leaves(tree.child1, path + ((tree.coord, 1),))


def truncate_depth(tree, max_depth, fill=1):
    """Replace every subtree below ``max_depth`` queries with ``Leaf(fill)``.

    For a tree with ``s`` leaves, truncating at depth ``log2(s / eps)`` changes
    the output on at most an ``eps`` fraction of inputs.
    """
    if isinstance(tree, Leaf):
        return tree
    if max_depth <= 0:
        return Leaf(fill)
    if isinstance(tree, Chance):
        return Chance(tree.p, truncate_depth(tree.taken, max_depth, fill),
                      truncate_depth(tree.skipped, max_depth, fill))
    return Query(tree.coord, truncate_depth(tree.child0, max_depth - 1, fill),
                 truncate_depth(tree.child1, max_depth - 1, fill))


def truncate_cost(tree, costs, cutoff, fill=1, spent=0):
    """Replace any query that would push the path cost above ``cutoff`` with ``Leaf(fill)``."""
    if isinstance(tree, Leaf):
        return tree
    if isinstance(tree, Chance):
        return Chance(tree.p, truncate_cost(tree.taken, costs, cutoff, fill, spent),
                      truncate_cost(tree.skipped, costs, cutoff, fill, spent))
    paid = spent + costs[tree.coord]
    if paid > cutoff:
        return Leaf(fill)
    return Query(tree.coord, truncate_cost(tree.child0, costs, cutoff, fill, paid),
                 truncate_cost(tree.child1, costs, cutoff, fill, paid))


def random_tree(coords, rng, stop_prob=0.3, force_query=False):
    """Random deterministic tree over ``coords`` with random leaf labels."""
    coords = list(coords)
    if not coords or (not force_query and rng.random() < stop_prob):
        return Leaf(1 if rng.random() < 0.5 else -1)
    i = coords[rng.integers(len(coords))]
    rest = [j for j in coords if j != i]
    return Query(i, random_tree(rest, rng, stop_prob), random_tree(rest, rng, stop_prob))


def iter_shapes(coords):
    """Every query structure over ``coords``, leaves labelled ``+1``.

    There are 1, 2, 9, 244, 238145 shapes for 0..4 coordinates.
    """
    coords = tuple(coords)
    yield Leaf(1)
    for i in coords:
        rest = tuple(j for j in coords if j != i)
        subs = list(iter_shapes(rest))
        for a in subs:
            for b in subs:
                yield Query(i, a, b)


def to_json(tree):
    if isinstance(tree, Leaf):
        return {"out": tree.out}
    if isinstance(tree, Chance):
        return {"p": str(tree.p), "taken": to_json(tree.taken), "skipped": to_json(tree.skipped)}
    return {"q": tree.coord + 1, "0": to_json(tree.child0), "1": to_json(tree.child1)}


def from_json(doc, loc="$"):
    if not isinstance(doc, dict):
        raise SpecError(loc, "tree node must be an object")
    if "out" in doc:
        if doc["out"] not in (1, -1) or isinstance(doc["out"], bool):
            raise SpecError(f"{loc}.out", "leaf output must be 1 or -1")
        return Leaf(doc["out"])
    if "q" in doc:
        q = doc["q"]
        if not isinstance(q, int) or isinstance(q, bool) or q < 1:
            raise SpecError(f"{loc}.q", "query coordinate must be a positive integer (1-based)")
        for key in ("0", "1"):
            if key not in doc:
                raise SpecError(loc, f"query node is missing child {key!r}")
        return Query(q - 1, from_json(doc["0"], f"{loc}.0"), from_json(doc["1"], f"{loc}.1"))
    if "p" in doc:
        try:
            p = Fraction(doc["p"])
        except (TypeError, ValueError, ZeroDivisionError):
            raise SpecError(f"{loc}.p", "chance probability must be a rational string") from None
        if not 0 <= p <= 1:
            raise SpecError(f"{loc}.p", "chance probability must lie in [0, 1]")
        return Chance(p, from_json(doc.get("taken"), f"{loc}.taken"),
                      from_json(doc.get("skipped"), f"{loc}.skipped"))
    raise SpecError(loc, "tree node needs one of 'out', 'q' or 'p'")


def nodes(tree) -> Iterator[Tree]:
    yield tree
    if isinstance(tree, Query):
        yield from nodes(tree.child0)
        yield from nodes(tree.child1)
    elif isinstance(tree, Chance):
        yield from nodes(tree.taken)
        yield from nodes(tree.skipped)
