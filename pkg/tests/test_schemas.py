import json
from fractions import Fraction as F

import pytest
from hypothesis import given

from ndstk.fuzzy import PCFuzzy
from ndstk.hyperspace import Arc, FiniteCompact
from ndstk.schemas import (SCHEMAS, SchemaError, arc_from_json, arc_to_json, compact_from_json, compact_to_json,
                           dump_schemas, fuzzy_from_json, fuzzy_to_json, load, nds_from_json, nds_to_json,
                           plmap_from_json, plmap_to_json, validate)
from ndstk.spaces import autonomous, build_fm, build_rotation_sequence, build_transitive_zero_entropy, tent

from conftest import compacts, fuzzy_sets, pl_maps


@given(compacts())
def test_compact_round_trip(K):
    assert compact_from_json(json.loads(json.dumps(compact_to_json(K)))) == K


@given(fuzzy_sets())
def test_fuzzy_round_trip(u):
    assert fuzzy_from_json(json.loads(json.dumps(fuzzy_to_json(u)))) == u


@given(pl_maps())
def test_plmap_round_trip(f):
    assert plmap_from_json(plmap_to_json(f)) == f


@pytest.mark.parametrize("nds", [autonomous(tent()), build_rotation_sequence([F(1, 3), F(2, 5)]),
                                 build_transitive_zero_entropy(2).nds, autonomous(build_fm(3))])
def test_nds_round_trip(nds):
    doc = json.loads(json.dumps(nds_to_json(nds)))
    back = nds_from_json(doc)
    for t in range(12):
        assert back.map_at(t) == nds.map_at(t)


def test_arc_round_trip():
    for A in (Arc(F(1, 3), F(1, 2)), Arc(F(3, 4), F(1, 4)), Arc(F(0), F(0), True)):
        assert arc_from_json(arc_to_json(A)) == A


@pytest.mark.parametrize("kind,doc", [
    ("compact", []),
    ("compact", [0.5]),
    ("compact", {"points": ["1/2"], "extra": 1}),
    ("fuzzy", {"thresholds": ["1"]}),
    ("arc", {"a": "1/2"}),
    ("plmap", {"nodes": [["0", "0"]]}),
    ("nds", {"prefix": []}),
])
def test_invalid_documents(kind, doc):
    with pytest.raises(SchemaError):
        validate(doc, kind)


def test_semantic_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        fuzzy_from_json({"thresholds": ["1", "1/2"], "levels": [["0"], ["0"]]})
    with pytest.raises(ValueError):
        compact_from_json(["3/2"])


def test_dump_and_load(tmp_path):
    paths = dump_schemas(tmp_path)
    assert len(paths) == len(SCHEMAS)
    for p in paths:
        json.loads(p.read_text())
    f = tmp_path / "k.json"
    f.write_text(json.dumps(["1/4", "3/4"]))
    assert load(f, "compact") == FiniteCompact((F(1, 4), F(3, 4)))
