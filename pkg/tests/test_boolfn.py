import json
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import pricedquery as pq
from pricedquery import boolfn as bf
from pricedquery import trees
from pricedquery.errors import CapacityError, InputError, SpecError

from conftest import tables


def inputs(n):
    """Inputs in table order (coordinate 0 is the low bit)."""
    return [tuple(int(v) for v in x) for x in bf.all_inputs(n)]


def pointwise(f):
    return [f.evaluate(x) for x in inputs(f.n)]


def same_function(f, g):
    X = bf.all_inputs(f.n)
    return np.array_equal(f.evaluate_batch(X), g.evaluate_batch(X))


class TestEvaluate:
    def test_and(self):
        f = pq.and_fn(2)
        assert f.evaluate((1, 1)) == 1
        assert f.evaluate((1, 0)) == -1

    def test_parity_convention(self):
        assert pq.parity(3).evaluate((1, 0, 1)) == 1
        assert pq.parity(3).evaluate((1, 0, 0)) == -1

    def test_call_alias(self):
        assert pq.and_fn(2)((1, 1)) == 1

    def test_arity_mismatch(self):
        with pytest.raises(InputError):
            pq.and_fn(2).evaluate((1, 1, 1))

    def test_non_binary_input(self):
        with pytest.raises(InputError):
            pq.and_fn(2).evaluate((2, 1))

    def test_halfspace_tie_is_positive(self):
        f = pq.halfspace(2, [1, -1], 0)
        assert f.evaluate((0, 0)) == 1
        assert f.evaluate((0, 1)) == -1


class TestRestrict:
    def test_and_zero_is_constant(self):
        g = pq.and_fn(2).restrict(0, 0)
        assert same_function(g, pq.constant(2, -1))

    def test_and_one_is_dictator(self):
        g = pq.and_fn(2).restrict(0, 1)
        assert same_function(g, pq.dictator(2, 1))

    def test_parity_negated(self):
        g = pq.parity(3).restrict(1, 1)
        for x in itertools.product((0, 1), repeat=3):
            assert g.evaluate(x) == -pq.parity(2).evaluate((x[0], x[2]))

    def test_ignores_pinned_position(self):
        g = pq.and_fn(2).restrict(0, 1)
        assert g.evaluate((0, 1)) == g.evaluate((1, 1)) == 1

    def test_double_restriction(self):
        with pytest.raises(InputError):
            pq.and_fn(2).restrict(0, 1).restrict(0, 0)

    def test_out_of_range(self):
        with pytest.raises(InputError):
            pq.and_fn(2).restrict(2, 0)

    def test_free(self):
        assert pq.parity(4).restrict(2, 0).free == (0, 1, 3)

    @given(tables(2, 6), st.data())
    def test_commutes(self, f, data):
        i, j = data.draw(st.lists(st.integers(0, f.n - 1), min_size=2, max_size=2, unique=True))
        a, b = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
        assert same_function(f.restrict(i, a).restrict(j, b), f.restrict(j, b).restrict(i, a))

    @given(tables(1, 6), st.data())
    def test_table_of_restriction_is_half(self, f, data):
        i = data.draw(st.integers(0, f.n - 1))
        b = data.draw(st.integers(0, 1))
        full = f.to_truth_table()
        idx = np.arange(1 << f.n)
        half = full[((idx >> i) & 1) == b]
        assert np.array_equal(f.restrict(i, b).to_truth_table(), half)


class TestTruthTable:
    def test_and(self):
        assert pq.and_fn(2).to_truth_table().tolist() == [-1, -1, -1, 1]

    def test_constant(self):
        assert pq.constant(3, 1).to_truth_table().tolist() == [1] * 8

    def test_tribes_count(self):
        assert int((pq.tribes(2, 2).to_truth_table() == 1).sum()) == 7

    def test_matches_evaluate(self):
        f = pq.majority(5)
        assert f.to_truth_table().tolist() == pointwise(f)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            pq.parity(21).to_truth_table()

    def test_wide_function_still_evaluates(self):
        f = pq.parity(30)
        assert f.evaluate([1] * 30) == 1
        assert f.restrict(0, 1).restrict(1, 1).restrict(2, 1).restrict(3, 1).restrict(5, 0).restrict(
            6, 0).restrict(7, 0).restrict(8, 0).restrict(9, 0).restrict(10, 0).to_truth_table().shape == (1 << 20,)


class TestRepresentationsAgree:
    def test_dnf_vs_table(self):
        f = pq.dnf(4, [[1, -2], [3, 4]])
        assert same_function(f, pq.from_table(4, [v == 1 for v in pointwise(f)]))

    def test_cnf_vs_dnf_dual(self):
        # (x1 or x2) and (not x3 or x4)
        f = pq.cnf(4, [[1, 2], [-3, 4]])
        expected = [1 if (x[0] or x[1]) and ((not x[2]) or x[3]) else -1
                    for x in inputs(4)]
        assert pointwise(f) == expected

    def test_majority_vs_halfspace(self):
        assert same_function(pq.majority(5), pq.halfspace(5, [1] * 5, 3))

    def test_tribes_vs_dnf(self):
        assert same_function(pq.tribes(2, 3), pq.dnf(6, [[1, 2], [3, 4], [5, 6]]))

    def test_intersection(self):
        a = bf.Halfspace(3, [1, 1, 0], 1)
        b = bf.Halfspace(3, [0, 1, 1], 2)
        f = pq.intersection(3, [a, b])
        for x in itertools.product((0, 1), repeat=3):
            assert f.evaluate(x) == (1 if x[0] + x[1] >= 1 and x[1] + x[2] >= 2 else -1)

    def test_tree_and_callback(self):
        tree = trees.Query(0, trees.Leaf(-1), trees.Query(1, trees.Leaf(-1), trees.Leaf(1)))
        assert same_function(pq.from_tree(2, tree), pq.and_fn(2))
        assert same_function(pq.from_callback(2, lambda x: 1 if x[0] and x[1] else -1), pq.and_fn(2))

    def test_dictator_or(self):
        assert pointwise(pq.dictator(3, 2)) == [1 if x[2] else -1 for x in inputs(3)]
        assert pointwise(pq.or_fn(2)) == [-1, 1, 1, 1]

    @given(tables(1, 8))
    def test_batch_matches_single(self, f):
        X = bf.all_inputs(f.n)
        assert f.evaluate_batch(X).tolist() == [f.evaluate(x) for x in X]


class TestSpec:
    def test_dnf_is_and(self):
        assert same_function(pq.parse_spec('{"kind":"dnf","n":2,"terms":[[1,2]]}'), pq.and_fn(2))

    def test_halfspace_is_majority(self):
        f = pq.parse_spec('{"kind":"halfspace","n":3,"w":[1,1,1],"theta":2}')
        assert same_function(f, pq.majority(3))

    def test_parity(self):
        assert same_function(pq.parse_spec('{"kind":"parity","n":4}'), pq.parity(4))

    def test_table_hex(self):
        f = pq.parse_spec({"kind": "table", "n": 2, "bits": "8"})
        assert same_function(f, pq.and_fn(2))
        assert json.loads(pq.dump_spec(pq.from_table(2, [0, 0, 0, 1])))["bits"] == "8"

    def test_tree_spec(self):
        doc = {"kind": "tree", "n": 2, "tree": {"q": 1, "0": {"out": -1},
                                                  "1": {"q": 2, "0": {"out": -1}, "1": {"out": 1}}}}
        assert same_function(pq.parse_spec(doc), pq.and_fn(2))

    def test_restriction_field(self):
        f = pq.parity(3).restrict(1, 1)
        g = pq.parse_spec(pq.dump_spec(f))
        assert g.restriction == f.restriction
        assert same_function(f, g)

    @pytest.mark.parametrize("f", [
        pq.and_fn(3), pq.or_fn(2), pq.parity(4), pq.majority(3), pq.dictator(3, 1), pq.tribes(2, 2),
        pq.constant(2, -1), pq.dnf(3, [[1, -3]]), pq.cnf(3, [[1, 2], [-3]]), pq.halfspace(3, [2, -1, 1], 1),
        pq.intersection(2, [bf.Halfspace(2, [1, 1], 1), bf.Halfspace(2, [1, -1], 0)]),
        pq.from_table(3, [1, 0, 0, 1, 1, 1, 0, 0]),
        pq.from_tree(2, trees.Query(1, trees.Leaf(1), trees.Leaf(-1))),
    ], ids=lambda f: f.kind)
    def test_round_trip(self, f):
        assert same_function(pq.parse_spec(pq.dump_spec(f)), f)

    @given(tables(1, 8))
    def test_round_trip_tables(self, f):
        assert same_function(pq.parse_spec(pq.dump_spec(f)), f)

    @pytest.mark.parametrize("text, location", [
        ('{"kind":"dnf","n":2,"terms":[[1,3]]}', "$.terms[0][1]"),
        ('{"kind":"nope","n":2}', "$.kind"),
        ('{"kind":"halfspace","n":3,"w":[1,1],"theta":1}', "$.w"),
        ('{"kind":"parity"}', "$"),
        ('{"kind":"tribes","w":2,"s":2,"n":5}', "$.n"),
        ('{"kind":"table","n":2,"bits":"1f"}', "$.bits"),
        ('{"kind":"dictator","n":2,"i":3}', "$.i"),
        ('{"kind":"parity","n":2,"restriction":[[3,0]]}', "$.restriction[0]"),
        ('[1,2]', "$"),
        ('{"kind":', "line 1"),
    ])
    def test_errors_have_location(self, text, location):
        with pytest.raises(SpecError) as err:
            pq.parse_spec(text)
        assert str(err.value).startswith(location)


class TestCostVector:
    def test_rejects_nonpositive(self):
        with pytest.raises(InputError):
            pq.CostVector([1, 0])

    def test_arity(self):
        with pytest.raises(InputError):
            pq.CostVector([1, 2]).check_arity(3)

    def test_total(self):
        assert pq.CostVector([1, 4]).total == 5
