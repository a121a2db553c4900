"""JSON interchange formats for maps, systems, compact sets, arcs and fuzzy sets.

Every number is an exact fraction string ``"p/q"`` (or an integer string).
Documents are checked against the JSON Schemas below before conversion.
"""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .fuzzy import PCFuzzy
from .hyperspace import Arc, FiniteCompact
from .spaces import CIRCLE, INTERVAL, NdsSpec, PLMap, fstr, map_from_dict, map_to_dict, nds_from_dict, nds_to_dict

FRACTION = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
SPACE = {"enum": [INTERVAL, CIRCLE]}

PLMAP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "PLMap",
    "type": "object",
    "properties": {
        "space": SPACE,
        "nodes": {"type": "array", "minItems": 2,
                  "items": {"type": "array", "items": FRACTION, "minItems": 2, "maxItems": 2}},
    },
    "required": ["nodes"],
    "additionalProperties": False,
}

_MAP_REF = {"$ref": "#/$defs/plmap"}
NDS = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "NdsSpec",
    "$defs": {"plmap": {k: v for k, v in PLMAP.items() if k not in ("$schema", "title")}},
    "oneOf": [
        _MAP_REF,
        {
            "type": "object",
            "properties": {
                "space": SPACE,
                "prefix": {"type": "array", "items": _MAP_REF},
                "tail": {
                    "oneOf": [
                        {"type": "object", "properties": {"kind": {"const": "constant"}, "map": _MAP_REF},
                         "required": ["kind", "map"], "additionalProperties": False},
                        {"type": "object", "properties": {"kind": {"const": "cycle"},
                                                          "maps": {"type": "array", "minItems": 1, "items": _MAP_REF}},
                         "required": ["kind", "maps"], "additionalProperties": False},
                        {"type": "object",
                         "properties": {
                             "kind": {"const": "levels"},
                             "blocks": {"type": "array", "items": {
                                 "type": "object",
                                 "properties": {"map": _MAP_REF, "length": {"type": "integer", "minimum": 1}},
                                 "required": ["map", "length"], "additionalProperties": False}},
                             "final": _MAP_REF},
                         "required": ["kind", "blocks", "final"], "additionalProperties": False},
                    ]
                },
            },
            "required": ["tail"],
            "additionalProperties": False,
        },
    ],
}

_POINTS = {"type": "array", "minItems": 1, "items": FRACTION}
FINITE_COMPACT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "FiniteCompact",
    "oneOf": [
        _POINTS,
        {"type": "object", "properties": {"space": SPACE, "points": _POINTS},
         "required": ["points"], "additionalProperties": False},
    ],
}

ARC = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Arc",
    "type": "object",
    "properties": {"a": FRACTION, "b": FRACTION, "full": {"type": "boolean"}},
    "required": ["a", "b"],
    "additionalProperties": False,
}

PC_FUZZY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "PCFuzzy",
    "type": "object",
    "properties": {
        "space": SPACE,
        "thresholds": {"type": "array", "minItems": 1, "items": FRACTION},
        "levels": {"type": "array", "minItems": 1, "items": _POINTS},
    },
    "required": ["thresholds", "levels"],
    "additionalProperties": False,
}

SCHEMAS = {"plmap": PLMAP, "nds": NDS, "compact": FINITE_COMPACT, "arc": ARC, "fuzzy": PC_FUZZY}


class SchemaError(ValueError):
    pass


def validate(doc, kind: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{kind} document invalid at {path}: {e.message}") from None


def compact_to_json(K: FiniteCompact):
    pts = [fstr(p) for p in K.points]
    return pts if K.space == INTERVAL else {"space": K.space, "points": pts}


def compact_from_json(doc) -> FiniteCompact:
    validate(doc, "compact")
    if isinstance(doc, list):
        return FiniteCompact(tuple(doc))
    return FiniteCompact(tuple(doc["points"]), doc.get("space", INTERVAL))


def arc_to_json(A: Arc) -> dict:
    return {"a": fstr(A.a), "b": fstr(A.b), "full": A.full}


def arc_from_json(doc) -> Arc:
    validate(doc, "arc")
    return Arc(doc["a"], doc["b"], bool(doc.get("full", False)))


def fuzzy_to_json(u: PCFuzzy) -> dict:
    out = {"thresholds": [fstr(a) for a in u.thresholds], "levels": [[fstr(p) for p in C] for C in u.levels]}
    if u.space != INTERVAL:
        out["space"] = u.space
    return out


def fuzzy_from_json(doc) -> PCFuzzy:
    validate(doc, "fuzzy")
    space = doc.get("space", INTERVAL)
    return PCFuzzy(tuple(doc["thresholds"]), tuple(FiniteCompact(tuple(c), space) for c in doc["levels"]))


def plmap_to_json(f: PLMap) -> dict:
    return map_to_dict(f)


def plmap_from_json(doc) -> PLMap:
    validate(doc, "plmap")
    return map_from_dict(doc)


def nds_to_json(nds: NdsSpec) -> dict:
    return nds_to_dict(nds)


def nds_from_json(doc) -> NdsSpec:
    validate(doc, "nds")
    return nds_from_dict(doc)


LOADERS = {"plmap": plmap_from_json, "nds": nds_from_json, "compact": compact_from_json,
           "arc": arc_from_json, "fuzzy": fuzzy_from_json}


def load(path, kind: str):
    """Read and convert one fixture file."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return LOADERS[kind](doc)


def dump_schemas(directory) -> list:
    """Write every schema as ``<name>.schema.json``; returns the paths."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, schema in SCHEMAS.items():
        p = d / f"{name}.schema.json"
        p.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(p)
    return paths
