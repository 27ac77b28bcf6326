import json
from importlib import resources

import pytest
from hypothesis import given

jsonschema = pytest.importorskip("jsonschema")

import pricedquery as pq
from pricedquery import boolfn as bf
from pricedquery import trees
from pricedquery.cli import main

from conftest import tables


def schema(name):
    return json.loads(resources.files("pricedquery").joinpath("schemas", name).read_text())


FUNCTION = schema("function.schema.json")
REPORT = schema("report.schema.json")


def test_schemas_are_valid():
    jsonschema.Draft202012Validator.check_schema(FUNCTION)
    jsonschema.Draft202012Validator.check_schema(REPORT)


@pytest.mark.parametrize("f", [
    pq.and_fn(3), pq.parity(4), pq.majority(3), pq.dictator(3, 1), pq.tribes(2, 2), pq.constant(2, 1),
    pq.cnf(3, [[1, -2]]), pq.halfspace(3, [1, -2, 3], 1),
    pq.intersection(2, [bf.Halfspace(2, [1, 1], 1)]),
    pq.from_tree(2, trees.Query(0, trees.Leaf(1), trees.Leaf(-1))),
    pq.parity(3).restrict(2, 1),
], ids=lambda f: f.kind)
def test_dumped_specs_validate(f):
    jsonschema.validate(json.loads(pq.dump_spec(f)), FUNCTION)


@given(tables(1, 6))
def test_table_specs_validate(f):
    jsonschema.validate(json.loads(pq.dump_spec(f)), FUNCTION)


@pytest.mark.parametrize("doc", [
    {"kind": "dnf", "n": 2},
    {"kind": "halfspace", "n": 2, "w": [1, 1]},
    {"kind": "constant", "n": 2, "value": 0},
    {"kind": "tree", "n": 1, "tree": {"q": 1, "0": {"out": 1}}},
    {"kind": "other", "n": 1},
])
def test_schema_rejects_what_the_parser_rejects(doc):
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, FUNCTION)
    with pytest.raises(pq.SpecError):
        pq.parse_spec(doc)


@pytest.mark.parametrize("argv", [
    ["run", "--f", "and:2", "--seed", "0"],
    ["influence", "--f", "tribes:2:2"],
    ["opt", "--f", "majority:3"],
    ["budget", "--f", "parity:2", "--seed", "0"],
    ["verify", "--suite", "cost_lemma", "--max-n", "3", "--seed", "0"],
])
def test_json_reports_validate(tmp_path, argv):
    out = tmp_path / "r.json"
    assert main(argv + ["--format", "json", "--out", str(out)]) == 0
    jsonschema.validate(json.loads(out.read_text()), REPORT)
