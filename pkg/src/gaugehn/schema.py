"""JSON schemas for the input spec, the sweep config and every output document."""

from __future__ import annotations

import jsonschema

SCHEMA_VERSION = 1

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
EXACT_OR_ROOT = {"type": "string", "pattern": r"^-?(\d+(/\d+)?|sqrt\(\d+(/\d+)?\))$"}
POINT = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
TWISTS = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
PAIR = {
    "type": "object",
    "required": ["image", "tau"],
    "properties": {
        "image": {"type": "array", "items": {"type": "integer", "minimum": 1}, "uniqueItems": True},
        "tau": RATIONAL,
    },
    "additionalProperties": False,
}

BUNDLE_SPEC = {
    "type": "object",
    "required": ["twists"],
    "properties": {"twists": {"type": "array", "items": {"type": "integer"}}, "pair": PAIR},
    "additionalProperties": False,
}

_RUN = {
    "type": "object",
    "properties": {
        "max_rank": {"type": "integer", "minimum": 1},
        "twist_range": POINT,
        "degree_slack": {"type": "integer", "minimum": 0},
        "grid_resolution": {"type": "number", "exclusiveMinimum": 0, "maximum": 1e-2},
        "grid_samples": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer"},
        "tau_grid": {"type": "array", "items": RATIONAL},
        "spectrum_values": {"type": "array", "items": {"type": "integer"}},
    },
    "additionalProperties": False,
}

CONFIG = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "classical": {"oneOf": [_RUN, {"type": "null"}]},
        "pairs": {"oneOf": [_RUN, {"type": "null"}]},
        "corrupt_closed_form": {"type": "boolean"},
    },
    "additionalProperties": False,
}


def _doc(command: str, props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "required": ["schema", "command", *required],
        "properties": {
            "schema": {"const": SCHEMA_VERSION},
            "command": {"const": command},
            **props,
        },
        "additionalProperties": False,
    }


_PAIR_OUT = {
    "oneOf": [
        {"type": "null"},
        {
            "type": "object",
            "required": ["image", "tau", "tau_semistable"],
            "properties": {
                "image": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "tau": RATIONAL,
                "tau_semistable": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    ]
}

HN_DOC = _doc(
    "hn",
    {
        "twists": TWISTS,
        "steps": {"type": "array", "items": POINT},
        "quotients": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rank", "slope"],
                "properties": {"rank": {"type": "integer"}, "slope": RATIONAL},
                "additionalProperties": False,
            },
        },
        "slopes": {"type": "array", "items": RATIONAL},
        "vertices": {"type": "array", "items": POINT},
        "semistable": {"type": "boolean"},
    },
    ["twists", "steps", "quotients", "slopes", "vertices", "semistable"],
)

_DESTABILIZER = {
    "type": "object",
    "required": ["steps", "direction", "norm_sq", "min_weight", "float_view", "skip_index",
                 "case", "m_index", "limit"],
    "properties": {
        "steps": {"type": "array", "items": POINT},
        "direction": {"type": "array", "items": RATIONAL},
        "norm_sq": RATIONAL,
        "min_weight": {
            "type": "object",
            "required": ["exact", "float"],
            "properties": {"exact": EXACT_OR_ROOT, "float": {"type": "number"}},
            "additionalProperties": False,
        },
        "float_view": {"type": "array", "items": {"type": "number"}},
        "skip_index": {"type": ["integer", "null"]},
        "case": {"enum": ["A", "B", "C", None]},
        "m_index": {"type": ["integer", "null"]},
        "limit": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["twists", "carries_morphism"],
                "properties": {"twists": TWISTS, "carries_morphism": {"type": "boolean"}},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

DESTABILIZE_DOC = _doc(
    "destabilize",
    {
        "twists": TWISTS,
        "pair": _PAIR_OUT,
        "destabilizer": {"oneOf": [{"type": "null"}, _DESTABILIZER]},
    },
    ["twists", "pair", "destabilizer"],
)

POLYGON_DOC = _doc(
    "polygon",
    {"twists": TWISTS, "vertices": {"type": "array", "items": POINT}, "baseline": RATIONAL},
    ["twists", "vertices", "baseline"],
)

VERIFY_DOC = _doc(
    "verify",
    {
        "ok": {"type": "boolean"},
        "runs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "ok", "checked", "violations"],
                "properties": {
                    "kind": {"enum": ["classical", "pairs"]},
                    "ok": {"type": "boolean"},
                    "checked": {"type": "object", "additionalProperties": {"type": "integer"}},
                    "violations": {"type": "array", "items": {"type": "object"}},
                },
                "additionalProperties": False,
            },
        },
    },
    ["ok", "runs"],
)

DOCUMENTS = {
    "hn": HN_DOC,
    "destabilize": DESTABILIZE_DOC,
    "polygon": POLYGON_DOC,
    "verify": VERIFY_DOC,
}


def validate(doc: dict) -> None:
    """Raise ``jsonschema.ValidationError`` unless ``doc`` is a valid output document."""
    jsonschema.validate(doc, DOCUMENTS[doc["command"]])
