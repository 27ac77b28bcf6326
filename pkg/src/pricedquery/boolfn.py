"""Boolean functions ``f : {0,1}^n -> {+1, -1}`` under several representations.

Conventions
-----------
* Coordinates are 0-based in the Python API and 1-based in JSON documents.
* Coordinate 0 is the least-significant bit of a truth-table index, so the
  table of AND on two bits is ``(-1, -1, -1, +1)`` for inputs ``00, 01, 10, 11``
  read as ``x1 x0``.
* ``sign(0) = +1`` everywhere: halfspaces output +1 when ``w.x == theta`` and
  a balanced majority outputs +1.
* Parity outputs +1 iff the XOR of the bits is 0.

Every :class:`BoolFn` is an immutable pair of a base representation and a
:class:`Restriction` overlay. Restricting never rewrites the representation,
so black-box callbacks restrict exactly like formulas do.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from . import trees
from .errors import CapacityError, InputError, SpecError

MAX_TABLE_ARITY = 20
_CHUNK = 1 << 16


class Restriction:
    """Partial assignment of distinct coordinates to bits (a query history)."""

    __slots__ = ("_pairs",)

    def __init__(self, pairs=()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        seen = {}
        for i, b in pairs:
            i, b = int(i), int(b)
            if b not in (0, 1):
                raise InputError(f"restriction bit must be 0 or 1, got {b}")
            if i < 0:
                raise InputError(f"restriction coordinate must be non-negative, got {i}")
            if i in seen:
                raise InputError(f"coordinate {i} restricted twice")
            seen[i] = b
        self._pairs = tuple(sorted(seen.items()))

    @property
    def pairs(self):
        return self._pairs

    def as_dict(self):
        return dict(self._pairs)

    def assign(self, i, b):
        if i in self:
            raise InputError(f"coordinate {i} is already restricted")
        return Restriction(self._pairs + ((i, b),))

    def get(self, i, default=None):
        for j, b in self._pairs:
            if j == i:
                return b
        return default

    def consistent(self, x):
        return all(x[i] == b for i, b in self._pairs)

    def __contains__(self, i):
        return any(j == i for j, _ in self._pairs)

    def __len__(self):
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __eq__(self, other):
        return isinstance(other, Restriction) and self._pairs == other._pairs

    def __hash__(self):
        return hash(self._pairs)

    def __repr__(self):
        return f"Restriction({dict(self._pairs)})"


class CostVector(tuple):
    """Positive integer price per coordinate."""

    def __new__(cls, costs):
        vals = []
        for c in costs:
            if isinstance(c, bool) or int(c) != c or c < 1:
                raise InputError(f"costs must be positive integers, got {c!r}")
            vals.append(int(c))
        if not vals:
            raise InputError("cost vector must be non-empty")
        return super().__new__(cls, vals)

    @property
    def total(self):
        return sum(self)

    def check_arity(self, n):
        if len(self) != n:
            raise InputError(f"cost vector has length {len(self)} but the function has arity {n}")
        return self


def all_inputs(n):
    """The ``2**n`` inputs as a ``(2**n, n)`` uint8 matrix, row ``x`` holding the bits of ``x``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def _bits_to_hex(bits01):
    packed = np.packbits(bits01.astype(np.uint8), bitorder="little")
    return format(int.from_bytes(packed.tobytes(), "little"), "x")


def _hex_to_bits(text, n, loc):
    try:
        value = int(text, 16)
    except (TypeError, ValueError):
        raise SpecError(loc, "truth table must be a hex string") from None
    size = 1 << n
    if value >> size:
        raise SpecError(loc, f"truth table has bits beyond the {size} inputs of arity {n}")
    raw = value.to_bytes(max(1, (size + 7) // 8), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size].copy()


# --------------------------------------------------------------------------
# Representations
# --------------------------------------------------------------------------

class Representation:
    """Base representation. Subclasses implement ``_eval01`` on 0/1 matrices."""

    kind = "abstract"

    def __init__(self, n):
        if int(n) != n or n < 1:
            raise InputError(f"arity must be a positive integer, got {n!r}")
        self.n = int(n)

    def _eval01(self, X):
        """Return a bool array: True where the output is +1."""
        raise NotImplementedError

    def eval_batch(self, X):
        return np.where(self._eval01(X), 1, -1).astype(np.int8)

    @cached_property
    def table01(self):
        if self.n > MAX_TABLE_ARITY:
            raise CapacityError(f"arity {self.n} exceeds the {MAX_TABLE_ARITY}-coordinate table limit")
        out = np.empty(1 << self.n, dtype=np.uint8)
        for start in range(0, 1 << self.n, _CHUNK):
            stop = min(start + _CHUNK, 1 << self.n)
            idx = np.arange(start, stop, dtype=np.int64)
            X = ((idx[:, None] >> np.arange(self.n)) & 1).astype(np.uint8)
            out[start:stop] = self._eval01(X)
        out.setflags(write=False)
        return out

    def to_spec(self):
        raise NotImplementedError


class TruthTable(Representation):
    kind = "table"

    def __init__(self, n, bits01):
        super().__init__(n)
        bits01 = np.asarray(bits01, dtype=np.uint8)
        if bits01.shape != (1 << self.n,):
            raise InputError(f"truth table for arity {n} needs {1 << n} entries, got {bits01.shape}")
        if bits01.max(initial=0) > 1:
            raise InputError("truth table entries must be 0/1")
        bits01 = bits01.copy()
        bits01.setflags(write=False)
        self.__dict__["table01"] = bits01

    def _eval01(self, X):
        idx = (X.astype(np.int64) << np.arange(self.n)).sum(axis=1)
        return self.table01[idx].astype(bool)

    def to_spec(self):
        return {"kind": "table", "n": self.n, "bits": _bits_to_hex(self.table01)}


def _check_literals(n, groups, what):
    out = []
    for g in groups:
        lits = tuple(int(v) for v in g)
        for v in lits:
            if v == 0 or abs(v) > n:
                raise InputError(f"{what} literal {v} out of range for arity {n}")
        if len({abs(v) for v in lits}) != len(lits):
            raise InputError(f"{what} {list(lits)} mentions a coordinate twice")
        out.append(lits)
    return tuple(out)


def _literal_matrix(X, lits):
    sat = np.ones(X.shape[0], dtype=bool)
    for v in lits:
        col = X[:, abs(v) - 1].astype(bool)
        sat &= col if v > 0 else ~col
    return sat


class DNF(Representation):
    """OR of AND terms; literals are signed 1-based coordinates."""

    kind = "dnf"

    def __init__(self, n, terms):
        super().__init__(n)
        self.terms = _check_literals(self.n, terms, "term")

    def _eval01(self, X):
        out = np.zeros(X.shape[0], dtype=bool)
        for t in self.terms:
            out |= _literal_matrix(X, t)
        return out

    def to_spec(self):
        return {"kind": "dnf", "n": self.n, "terms": [list(t) for t in self.terms]}


class Tribes(DNF):
    kind = "tribes"

    def __init__(self, w, s):
        if w < 1 or s < 1:
            raise InputError("tribes needs positive width and count")
        self.w, self.s = int(w), int(s)
        terms = [[j * w + k + 1 for k in range(w)] for j in range(s)]
        super().__init__(w * s, terms)

    def to_spec(self):
        return {"kind": "tribes", "n": self.n, "w": self.w, "s": self.s}


class CNF(Representation):
    """AND of OR clauses, the dual form of a DNF."""

    kind = "cnf-of-dnf-dual"

    def __init__(self, n, clauses):
        super().__init__(n)
        self.clauses = _check_literals(self.n, clauses, "clause")

    def _eval01(self, X):
        out = np.ones(X.shape[0], dtype=bool)
        for cl in self.clauses:
            # a clause is falsified exactly when every literal is false
            out &= ~_literal_matrix(X, tuple(-v for v in cl))
        return out

    def to_spec(self):
        return {"kind": "cnf-of-dnf-dual", "n": self.n, "clauses": [list(c) for c in self.clauses]}


class Halfspace(Representation):
    """``sign(sum_i w_i x_i - theta)`` with integer weights, ``sign(0) = +1``."""

    kind = "halfspace"

    def __init__(self, n, w, theta):
        super().__init__(n)
        w = [int(v) for v in w]
        if len(w) != self.n:
            raise InputError(f"halfspace has {len(w)} weights for arity {n}")
        self.w = tuple(w)
        self.theta = int(theta)

    def _eval01(self, X):
        return X.astype(np.int64) @ np.asarray(self.w, dtype=np.int64) >= self.theta

    def to_spec(self):
        return {"kind": "halfspace", "n": self.n, "w": list(self.w), "theta": self.theta}


class Intersection(Representation):
    """+1 iff every member halfspace outputs +1."""

    kind = "intersection"

    def __init__(self, n, halfspaces):
        super().__init__(n)
        self.halfspaces = tuple(h if isinstance(h, Halfspace) else Halfspace(n, *h) for h in halfspaces)
        if not self.halfspaces:
            raise InputError("intersection needs at least one halfspace")
        for h in self.halfspaces:
            if h.n != self.n:
                raise InputError("intersection members must share the arity")

    def _eval01(self, X):
        out = np.ones(X.shape[0], dtype=bool)
        for h in self.halfspaces:
            out &= h._eval01(X)
        return out

    def to_spec(self):
        return {"kind": "intersection", "n": self.n,
                "halfspaces": [{"w": list(h.w), "theta": h.theta} for h in self.halfspaces]}


class Parity(Representation):
    kind = "parity"

    def _eval01(self, X):
        return X.sum(axis=1, dtype=np.int64) % 2 == 0

    def to_spec(self):
        return {"kind": "parity", "n": self.n}


class Dictator(Representation):
    kind = "dictator"

    def __init__(self, n, i):
        super().__init__(n)
        if not 0 <= i < self.n:
            raise InputError(f"dictator coordinate {i} out of range for arity {n}")
        self.i = int(i)

    def _eval01(self, X):
        return X[:, self.i].astype(bool)

    def to_spec(self):
        return {"kind": "dictator", "n": self.n, "i": self.i + 1}


class Majority(Representation):
    kind = "majority"

    def _eval01(self, X):
        return 2 * X.sum(axis=1, dtype=np.int64) >= self.n

    def to_spec(self):
        return {"kind": "majority", "n": self.n}


class Constant(Representation):
    kind = "constant"

    def __init__(self, n, value):
        super().__init__(n)
        if value not in (1, -1):
            raise InputError("constant value must be +1 or -1")
        self.value = value

    def _eval01(self, X):
        return np.full(X.shape[0], self.value == 1)

    def to_spec(self):
        return {"kind": "constant", "n": self.n, "value": self.value}


class TreeFunction(Representation):
    kind = "tree"

    def __init__(self, n, tree):
        super().__init__(n)
        if not trees.is_deterministic(tree):
            raise InputError("a function tree must be deterministic")
        trees.validate(tree, self.n)
        self.tree = tree

    def _eval01(self, X):
        return trees.evaluate_batch(self.tree, X) == 1

    def to_spec(self):
        return {"kind": "tree", "n": self.n, "tree": trees.to_json(self.tree)}


class Callback(Representation):
    """Opaque black box: ``fn`` maps a tuple of bits to +1 or -1."""

    kind = "callback"

    def __init__(self, n, fn: Callable[[tuple], int]):
        super().__init__(n)
        self.fn = fn

    def _eval01(self, X):
        out = np.empty(X.shape[0], dtype=bool)
        for r, row in enumerate(X):
            v = self.fn(tuple(int(b) for b in row))
            if v not in (1, -1):
                raise InputError(f"callback returned {v!r}, expected +1 or -1")
            out[r] = v == 1
        return out

    def to_spec(self):
        return {"kind": "table", "n": self.n, "bits": _bits_to_hex(self.table01)}


# --------------------------------------------------------------------------
# BoolFn
# --------------------------------------------------------------------------

class BoolFn:
    """A representation plus a restriction overlay; immutable."""

    __slots__ = ("rep", "restriction")

    def __init__(self, rep: Representation, restriction: Restriction | None = None):
        self.rep = rep
        self.restriction = restriction if restriction is not None else Restriction()
        for i, _ in self.restriction:
            if i >= rep.n:
                raise InputError(f"restricted coordinate {i} outside arity {rep.n}")

    @property
    def n(self):
        return self.rep.n

    @property
    def kind(self):
        return self.rep.kind

    @property
    def free(self):
        """Unrestricted coordinates in ascending order."""
        fixed = self.restriction.as_dict()
        return tuple(i for i in range(self.n) if i not in fixed)

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise InputError(f"input has length {len(x)} but the function has arity {self.n}")
        X = np.asarray([x], dtype=np.uint8)
        if X.max(initial=0) > 1:
            raise InputError("inputs must be 0/1")
        return int(self.evaluate_batch(X)[0])

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate_batch(self, X):
        X = np.asarray(X, dtype=np.uint8)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise InputError(f"expected an (m, {self.n}) input matrix, got shape {X.shape}")
        if len(self.restriction):
            X = X.copy()
            for i, b in self.restriction:
                X[:, i] = b
        if self.n <= MAX_TABLE_ARITY and "table01" in self.rep.__dict__:
            idx = (X.astype(np.int64) << np.arange(self.n)).sum(axis=1)
            return np.where(self.rep.table01[idx], 1, -1).astype(np.int8)
        return self.rep.eval_batch(X)

    def restrict(self, i, b):
        if not 0 <= i < self.n:
            raise InputError(f"coordinate {i} outside arity {self.n}")
        return BoolFn(self.rep, self.restriction.assign(i, b))

    def restrict_all(self, alpha):
        """Add every assignment of ``alpha`` to the overlay."""
        pairs = alpha.pairs if isinstance(alpha, Restriction) else tuple(dict(alpha).items())
        if not pairs:
            return self
        return BoolFn(self.rep, Restriction(self.restriction.pairs + tuple(pairs)))

    def table01(self):
        """0/1 table (1 for +1) over the free coordinates, lowest free coordinate as LSB."""
        d = len(self.free)
        if d > MAX_TABLE_ARITY:
            raise CapacityError(f"{d} free coordinates exceed the {MAX_TABLE_ARITY}-coordinate table limit")
        if self.n <= MAX_TABLE_ARITY:
            base = self.rep.table01
            if not len(self.restriction):
                return base
            fixed = self.restriction.as_dict()
            cube = base.reshape((2,) * self.n)
            # axis a of the reshaped table holds coordinate n - 1 - a
            index = tuple(fixed.get(self.n - 1 - a, slice(None)) for a in range(self.n))
            return np.ascontiguousarray(cube[index]).reshape(-1)
        free = self.free
        out = np.empty(1 << d, dtype=np.uint8)
        for start in range(0, 1 << d, _CHUNK):
            stop = min(start + _CHUNK, 1 << d)
            idx = np.arange(start, stop, dtype=np.int64)
            X = np.zeros((stop - start, self.n), dtype=np.uint8)
            X[:, list(free)] = (idx[:, None] >> np.arange(d)) & 1
            out[start:stop] = self.evaluate_batch(X) == 1
        return out

    def to_truth_table(self):
        """Outputs (+1/-1, int8) over the ``2**free`` consistent inputs."""
        return np.where(self.table01(), 1, -1).astype(np.int8)

    def to_spec(self):
        doc = dict(self.rep.to_spec())
        if len(self.restriction):
            doc["restriction"] = [[i + 1, b] for i, b in self.restriction]
        return doc

    def __repr__(self):
        extra = f", restriction={self.restriction.as_dict()}" if len(self.restriction) else ""
        return f"BoolFn({self.kind}, n={self.n}{extra})"


def evaluate(f: BoolFn, x):
    return f.evaluate(x)


def restrict(f: BoolFn, i, b):
    return f.restrict(i, b)


def to_truth_table(f: BoolFn):
    return f.to_truth_table()


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------

def from_table(n, values):
    """Build from a sequence of 2**n outputs (+1/-1, or 0/1 with 1 meaning +1)."""
    arr = np.asarray(values)
    if arr.size and arr.min() < 0:
        arr = arr == 1
    return BoolFn(TruthTable(n, arr.astype(np.uint8)))


def and_fn(n):
    return BoolFn(DNF(n, [list(range(1, n + 1))]))


def or_fn(n):
    return BoolFn(DNF(n, [[i] for i in range(1, n + 1)]))


def parity(n):
    return BoolFn(Parity(n))


def dictator(n, i):
    return BoolFn(Dictator(n, i))


def majority(n):
    return BoolFn(Majority(n))


def tribes(w, s):
    return BoolFn(Tribes(w, s))


def constant(n, value):
    return BoolFn(Constant(n, value))


def dnf(n, terms):
    return BoolFn(DNF(n, terms))


def cnf(n, clauses):
    return BoolFn(CNF(n, clauses))


def halfspace(n, w, theta):
    return BoolFn(Halfspace(n, w, theta))


def intersection(n, halfspaces):
    return BoolFn(Intersection(n, halfspaces))


def from_tree(n, tree):
    return BoolFn(TreeFunction(n, tree))


def from_callback(n, fn):
    return BoolFn(Callback(n, fn))


# --------------------------------------------------------------------------
# JSON function specs
# --------------------------------------------------------------------------

KINDS = ("table", "dnf", "cnf-of-dnf-dual", "halfspace", "intersection", "parity",
         "dictator", "majority", "tribes", "tree", "constant")


def _int_field(doc, key, loc, minimum=None):
    if key not in doc:
        raise SpecError(loc, f"missing field {key!r}")
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecError(f"{loc}.{key}", "expected an integer")
    if minimum is not None and v < minimum:
        raise SpecError(f"{loc}.{key}", f"must be >= {minimum}")
    return v


def _literal_groups(doc, key, n, loc):
    groups = doc.get(key)
    if not isinstance(groups, list):
        raise SpecError(f"{loc}.{key}", "expected a list of literal lists")
    for j, g in enumerate(groups):
        if not isinstance(g, list) or not g:
            raise SpecError(f"{loc}.{key}[{j}]", "expected a non-empty list of signed coordinates")
        seen = set()
        for k, v in enumerate(g):
            if not isinstance(v, int) or isinstance(v, bool) or v == 0 or abs(v) > n:
                raise SpecError(f"{loc}.{key}[{j}][{k}]", f"literal must be a nonzero integer with |v| <= {n}")
            if abs(v) in seen:
                raise SpecError(f"{loc}.{key}[{j}][{k}]", "coordinate repeated within one group")
            seen.add(abs(v))
    return groups


def _weights(doc, n, loc):
    w = doc.get("w")
    if not isinstance(w, list) or any(not isinstance(v, int) or isinstance(v, bool) for v in w):
        raise SpecError(f"{loc}.w", "expected a list of integers")
    if len(w) != n:
        raise SpecError(f"{loc}.w", f"has {len(w)} weights but n = {n}")
    return w, _int_field(doc, "theta", loc)


def parse_spec(text, loc="$"):
    """Parse a function-spec document (JSON text or an already-decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"line {e.lineno} column {e.colno}", e.msg) from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SpecError(loc, "function spec must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError(f"{loc}.kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")

    if kind == "tribes":
        w = _int_field(doc, "w", loc, 1)
        s = _int_field(doc, "s", loc, 1)
        n = doc.get("n", w * s)
        if n != w * s:
            raise SpecError(f"{loc}.n", f"tribes({w},{s}) has arity {w * s}, not {n}")
        rep = Tribes(w, s)
    else:
        n = _int_field(doc, "n", loc, 1)
        if kind == "table":
            if n > MAX_TABLE_ARITY:
                raise SpecError(f"{loc}.n", f"tables are limited to {MAX_TABLE_ARITY} coordinates")
            rep = TruthTable(n, _hex_to_bits(doc.get("bits"), n, f"{loc}.bits"))
        elif kind == "dnf":
            rep = DNF(n, _literal_groups(doc, "terms", n, loc))
        elif kind == "cnf-of-dnf-dual":
            rep = CNF(n, _literal_groups(doc, "clauses", n, loc))
        elif kind == "halfspace":
            rep = Halfspace(n, *_weights(doc, n, loc))
        elif kind == "intersection":
            hs = doc.get("halfspaces")
            if not isinstance(hs, list) or not hs:
                raise SpecError(f"{loc}.halfspaces", "expected a non-empty list of {w, theta} objects")
            members = []
            for j, h in enumerate(hs):
                if not isinstance(h, dict):
                    raise SpecError(f"{loc}.halfspaces[{j}]", "expected an object")
                members.append(Halfspace(n, *_weights(h, n, f"{loc}.halfspaces[{j}]")))
            rep = Intersection(n, members)
        elif kind == "parity":
            rep = Parity(n)
        elif kind == "majority":
            rep = Majority(n)
        elif kind == "dictator":
            i = _int_field(doc, "i", loc, 1)
            if i > n:
                raise SpecError(f"{loc}.i", f"coordinate {i} exceeds n = {n}")
            rep = Dictator(n, i - 1)
        elif kind == "constant":
            v = doc.get("value")
            if v not in (1, -1) or isinstance(v, bool):
                raise SpecError(f"{loc}.value", "constant value must be 1 or -1")
            rep = Constant(n, v)
        else:
            tree = trees.from_json(doc.get("tree"), f"{loc}.tree")
            try:
                rep = TreeFunction(n, tree)
            except InputError as e:
                raise SpecError(f"{loc}.tree", str(e)) from None

    restriction = Restriction()
    if "restriction" in doc:
        pairs = doc["restriction"]
        if not isinstance(pairs, list):
            raise SpecError(f"{loc}.restriction", "expected a list of [coordinate, bit] pairs")
        parsed = []
        for j, p in enumerate(pairs):
            if (not isinstance(p, list) or len(p) != 2 or not all(isinstance(v, int) for v in p)
                    or not 1 <= p[0] <= rep.n or p[1] not in (0, 1)):
                raise SpecError(f"{loc}.restriction[{j}]", "expected [coordinate (1-based), bit]")
            parsed.append((p[0] - 1, p[1]))
        try:
            restriction = Restriction(parsed)
        except InputError as e:
            raise SpecError(f"{loc}.restriction", str(e)) from None
    return BoolFn(rep, restriction)


def dump_spec(f: BoolFn) -> str:
    return json.dumps(f.to_spec(), sort_keys=True)
