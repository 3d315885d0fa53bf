import json

import pytest

from vxd.descriptors import (corpus_names, load_algebra, load_cover, load_gauges, load_json,
                             load_trivialization, parse_basis, parse_form,
                             trivialization_to_dict)
from vxd.errors import BasisError, DegreeError, DescriptorError, ExprSyntaxError
from vxd.cech import zero_trivialization


def test_corpus_listing():
    names = corpus_names()
    for n in ("A1", "A2", "A3", "T1", "P1", "P2", "P1xP1", "Torus", "Aff2", "P2_broken"):
        assert n in names


def test_load_algebra_bases_and_twists():
    a3 = load_algebra("A3")
    assert a3.ambient.variables == ("x", "y", "z")
    assert set(a3.bases) >= {"coords", "shear", "tower", "linear", "twisted", "nested"}
    assert a3.twists["cubic"].degree == 3
    t1 = load_algebra("T1")
    assert t1.ambient.parse("1/x").is_unit()


def test_basis_fallback_and_unknown():
    a = load_algebra({"name": "Q", "variables": ["x"]})
    assert a.basis("coords").vectors[0].to_strings() == ["1"]
    with pytest.raises(DescriptorError):
        a.basis("missing")


def test_basis_block_shapes():
    a = load_algebra("A2").ambient
    rows = parse_basis(a, [["1", "0"], ["0", "1"]])
    assert parse_basis(a, {"rows": [["1", "0"], ["0", "1"]]}) == rows
    assert parse_basis(a, {"coordinates": ["x", "y"]}) == rows
    with pytest.raises(DescriptorError):
        parse_basis(a, {"other": 1})
    with pytest.raises(BasisError):
        parse_basis(a, {"coordinates": ["x", "x"]})


def test_form_block():
    a = load_algebra("A3").ambient
    w = parse_form(a, {"degree": 3, "terms": [[[0, 1, 2], "x"]]})
    assert str(w) == "(x)*dx^dy^dz"
    with pytest.raises(DescriptorError):
        parse_form(a, {"degree": 2, "terms": []}, 3)
    with pytest.raises(DescriptorError):
        parse_form(a, {"degree": 3})
    with pytest.raises(DegreeError):
        parse_form(a, {"degree": 3, "terms": [[[0, 1], "x"]]})


@pytest.mark.parametrize("data", [
    {"name": "E"},
    {"name": "E", "variables": []},
    {"name": "E", "variables": ["x", "x"]},
    {"name": "E", "variables": "x"},
    {"name": "E", "variables": ["x"], "denominators": ["1/x"]},
])
def test_bad_algebras(data):
    with pytest.raises(DescriptorError):
        load_algebra(data)


def test_bad_expression_in_basis():
    with pytest.raises(ExprSyntaxError):
        load_algebra({"name": "E", "variables": ["x"], "bases": {"b": [["x +"]]}})


@pytest.mark.parametrize("data", [
    {"name": "C", "variables": ["x"]},
    {"name": "C", "charts": 2, "variables": ["x"], "overlaps": {"a,b": ["x"]}},
    {"name": "C", "charts": 2, "variables": ["x"], "overlaps": {"1": ["1/x"]}},
    {"name": "C", "charts": 2, "variables": ["x"], "transitions": {"0,1,2": [["1"]]}},
    {"name": "C", "charts": 2, "variables": ["x"], "bases": [[["1"]]]},
    {"name": "C", "charts": 1, "variables": ["x"], "rank": 0},
    {"name": "C", "charts": 1, "variables": ["x"], "gauge": []},
])
def test_bad_covers(data):
    with pytest.raises(DescriptorError):
        load_cover(data)


def test_cover_without_transitions_or_bases():
    spec = load_cover({"name": "C", "charts": 1, "variables": ["x"]})
    with pytest.raises(DescriptorError):
        spec.cocycle()


def test_missing_and_invalid_files(tmp_path):
    with pytest.raises(DescriptorError):
        load_json("no_such_entry")
    p = tmp_path / "x.json"
    p.write_text("[1, 2]")
    with pytest.raises(DescriptorError):
        load_json(p)
    p.write_text("{")
    with pytest.raises(DescriptorError):
        load_json(str(p))


def test_gauges_and_trivialization_round_trip(tmp_path):
    p2 = load_cover("P2")
    gauges = load_gauges(p2.cover, "P2_gauges")
    assert len(gauges) == 3
    with pytest.raises(DescriptorError):
        load_gauges(p2.cover, {"name": "g"})
    omega = load_trivialization(p2.cover, "zero_trivialization")
    z = zero_trivialization(p2.cover)
    assert omega[0] == z[0] and omega[1] == z[1]
    data = {"two": {"0,1": [[[0, 1], "x"]]}, "three": {}}
    omega = load_trivialization(p2.cover, data)
    assert json.loads(json.dumps(trivialization_to_dict(omega))) == data
