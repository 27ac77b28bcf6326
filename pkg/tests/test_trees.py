import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pricedquery import boolfn as bf
from pricedquery import trees
from pricedquery.errors import InputError, SpecError

AND_TREE = trees.Query(0, trees.Leaf(-1), trees.Query(1, trees.Leaf(-1), trees.Leaf(1)))


@st.composite
def random_trees(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return n, trees.random_tree(range(n), np.random.default_rng(seed), stop_prob=0.2)


def test_evaluate():
    assert [trees.evaluate(AND_TREE, x) for x in ((0, 0), (1, 0), (0, 1), (1, 1))] == [-1, -1, -1, 1]


def test_depth_and_size():
    assert trees.depth(AND_TREE) == 2
    assert trees.size(AND_TREE) == 3


def test_iter_leaves_paths():
    paths = [path for path, _ in trees.iter_leaves(AND_TREE)]
    assert paths == [((0, 0),), ((0, 1), (1, 0)), ((0, 1), (1, 1))]


@pytest.mark.parametrize("n, count", [(0, 1), (1, 2), (2, 9), (3, 244)])
def test_shape_counts(n, count):
    assert sum(1 for _ in trees.iter_shapes(range(n))) == count


def test_validate_rejects_repeats():
    bad = trees.Query(0, trees.Query(0, trees.Leaf(1), trees.Leaf(1)), trees.Leaf(1))
    with pytest.raises(InputError):
        trees.validate(bad, 2)
    with pytest.raises(InputError):
        trees.validate(AND_TREE, 1)


def test_chance_cannot_be_evaluated():
    t = trees.Chance(Fraction(1, 2), trees.Leaf(1), trees.Leaf(-1))
    with pytest.raises(InputError):
        trees.evaluate(t, (0,))
    assert not trees.is_deterministic(t)


def test_json_is_one_based():
    assert trees.to_json(AND_TREE) == {"q": 1, "0": {"out": -1},
                                       "1": {"q": 2, "0": {"out": -1}, "1": {"out": 1}}}


def test_json_chance_round_trip():
    t = trees.Chance(Fraction(1, 3), AND_TREE, trees.Leaf(1))
    assert trees.from_json(trees.to_json(t)) == t


@pytest.mark.parametrize("doc, loc", [
    ({"q": 0, "0": {"out": 1}, "1": {"out": 1}}, "$.q"),
    ({"q": 1, "0": {"out": 1}}, "$"),
    ({"q": 1, "0": {"out": 2}, "1": {"out": 1}}, "$.0.out"),
    ({"p": "3/2", "taken": {"out": 1}, "skipped": {"out": 1}}, "$.p"),
    ({}, "$"),
])
def test_json_errors(doc, loc):
    with pytest.raises(SpecError) as err:
        trees.from_json(doc)
    assert str(err.value).startswith(loc)


@given(random_trees())
def test_json_round_trip(pair):
    _, t = pair
    assert trees.from_json(trees.to_json(t)) == t


@given(random_trees())
def test_batch_matches_single(pair):
    n, t = pair
    X = bf.all_inputs(n)
    assert trees.evaluate_batch(t, X).tolist() == [trees.evaluate(t, x) for x in X]


@given(random_trees(), st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 4)]))
def test_depth_truncation_error(pair, eps):
    n, t = pair
    cut_depth = math.ceil(math.log2(trees.size(t) / eps))
    cut = trees.truncate_depth(t, cut_depth)
    X = bf.all_inputs(n)
    changed = np.mean(trees.evaluate_batch(t, X) != trees.evaluate_batch(cut, X))
    assert changed <= eps
    assert trees.depth(cut) <= cut_depth


def test_truncate_depth_zero():
    assert trees.truncate_depth(AND_TREE, 0, fill=-1) == trees.Leaf(-1)


def test_truncate_cost():
    cut = trees.truncate_cost(AND_TREE, [1, 4], 4)
    assert cut == trees.Query(0, trees.Leaf(-1), trees.Leaf(1))
