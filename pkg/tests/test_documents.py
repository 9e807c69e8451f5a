import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semimonotone.documents import (
    DocumentError,
    dumps,
    family_json,
    loads,
    parse_family,
    parse_rational,
)
from semimonotone.generators import KINDS, generate, random_graph_candidate
from semimonotone.helly import Family


def test_rationals():
    assert parse_rational("3/4") == parse_rational("6/8")
    assert parse_rational(2) == 2
    for bad in ("0.5", "1e3", "", "a/b", "1/0", True, None):
        with pytest.raises(DocumentError):
            parse_rational(bad)


def test_float_literals_are_rejected():
    text = '{"schema_version": 1, "ambient_dim": 1, "members": [{"domain": [[["0", 0.5]]]}]}'
    with pytest.raises(DocumentError, match="rationals must be exact p/q"):
        parse_family(loads(text))


@pytest.mark.parametrize("domain, message", [
    ([], "empty domain"),
    ([[["0", None]]], "unbounded domain"),
    ([[["0", "inf"]]], "unbounded domain"),
    ([[["1", "1"]]], "empty domain box side"),
])
def test_domain_errors_are_distinct(domain, message):
    with pytest.raises(DocumentError, match=message):
        parse_family({"schema_version": 1, "ambient_dim": 1,
                      "members": [{"domain": domain, "map": {"constant": []}}]})


def test_discontinuous_map():
    d = {"schema_version": 1, "ambient_dim": 2, "members": [{
        "domain": [[["0", "1"]], [["1", "2"]]],
        "map": {"per_box": [{"matrix": [["0"]], "offset": ["0"]},
                            {"matrix": [["0"]], "offset": ["1"]}]}}]}
    with pytest.raises(DocumentError, match="discontinuous map"):
        parse_family(d)


def test_schema_checks():
    good = {"schema_version": 1, "ambient_dim": 1,
            "members": [{"id": "A", "domain": [[["0", "1"]]], "map": {"constant": []}}]}
    assert parse_family(good).ids == ("A",)
    with pytest.raises(DocumentError, match="schema_version"):
        parse_family(dict(good, schema_version=2))
    with pytest.raises(DocumentError, match="R\\^1"):
        parse_family(dict(good, ambient_dim=2))
    twice = dict(good, members=good["members"] * 2)
    with pytest.raises(DocumentError, match="distinct"):
        parse_family(twice)


def test_vertex_form():
    d = {"schema_version": 1, "ambient_dim": 2, "members": [{
        "domain": [[["0", "1"]], [["0", "1/2"]]],
        "map": {"vertices": [[["0"], ["0"]], [["1/2"], ["1"]], [["1"], ["0"]]]}}]}
    fam = parse_family(d)
    assert len(fam.members[0].triangulation.simplices) == 2


def test_canonical_text():
    text = dumps({"b": 1, "a": ["1/2"]})
    assert text == '{\n  "a": [\n    "1/2"\n  ],\n  "b": 1\n}\n'


@given(st.sampled_from(KINDS), st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 5))
def test_round_trip(kind, seed, dim, s):
    fam = generate(kind, {"s": s, "dim": dim}, seed)
    text = dumps(family_json(fam))
    again = parse_family(loads(text))
    assert again == fam
    assert dumps(family_json(again)) == text
    json.loads(text, parse_float=lambda t: pytest.fail(f"float {t} in a family document"))


@given(st.integers(0, 10**6))
def test_round_trip_of_piecewise_graphs(seed):
    g = random_graph_candidate(random.Random(seed))
    fam = Family(g.ambient_dim, (g,))
    assert parse_family(loads(dumps(family_json(fam)))) == fam
