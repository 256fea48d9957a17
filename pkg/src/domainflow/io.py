"""JSON specs for curves, fields, domains, group elements and run configs."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .charts import Chart, DomainRep
from .flow import FlowConfig
from .functionspace import PeriodicScalarField
from .geometry import Circle, Collar, Ellipse, FourierCurve
from .groups import GroupElement

DEFAULT_N = 128


class ConfigError(Exception):
    """Malformed or out-of-range configuration."""


_number = {"type": "number"}
_vec2 = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}

CURVE_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["circle", "ellipse", "fourier"]}, "n": {"type": "integer", "minimum": 8}},
    "allOf": [
        {"if": {"properties": {"kind": {"const": "circle"}}},
         "then": {"required": ["radius"],
                  "properties": {"center": _vec2, "radius": {"type": "number", "exclusiveMinimum": 0}}}},
        {"if": {"properties": {"kind": {"const": "ellipse"}}},
         "then": {"required": ["a", "b"],
                  "properties": {"center": _vec2, "a": {"type": "number", "exclusiveMinimum": 0},
                                 "b": {"type": "number", "exclusiveMinimum": 0}}}},
        {"if": {"properties": {"kind": {"const": "fourier"}}},
         "then": {"required": ["cx", "cy"],
                  "properties": {"cx": {"type": "array", "items": _number},
                                 "cy": {"type": "array", "items": _number}}}},
    ],
}

FIELD_SCHEMA = {
    "oneOf": [
        {"type": "object", "required": ["values"],
         "properties": {"n": {"type": "integer"}, "values": {"type": "array", "items": _number}}},
        {"type": "object", "required": ["fourier"],
         "properties": {"fourier": {"type": "object",
                                    "properties": {"a": {"type": "array", "items": _number},
                                                   "b": {"type": "array", "items": _number}}}}},
    ]
}

DOMAIN_SCHEMA = {
    "type": "object",
    "required": ["chart"],
    "properties": {
        "chart": {"type": "object", "required": ["curve"],
                  "properties": {"curve": CURVE_SCHEMA, "delta": {"type": "number", "exclusiveMinimum": 0}}},
        "rho": FIELD_SCHEMA,
    },
}

FLOW_PROPERTIES = {
    "dt": {"type": "number", "exclusiveMinimum": 0},
    "T": {"type": "number", "exclusiveMinimum": 0},
    "rechart_threshold": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    "smoothing_cutoff": {"type": "integer", "minimum": 1},
    "n": {"type": "integer", "minimum": 32},
    "integrator": {"enum": ["rk4", "euler"]},
    "filter_modes": {"type": "integer", "minimum": 0},
}

SIMULATE_SCHEMA = {
    "type": "object",
    "required": ["domain", "dt", "T"],
    "properties": {
        "domain": DOMAIN_SCHEMA,
        **FLOW_PROPERTIES,
        "output": {"type": "object",
                   "properties": {"path": {"type": "string"}, "every": {"type": "integer", "minimum": 1}}},
    },
}

GROUP_SCHEMA = {
    "type": "object", "minProperties": 1, "maxProperties": 1,
    "properties": {"translate": _vec2, "dilate": {"type": "number", "exclusiveMinimum": 0},
                   "rotate": _number},
    "additionalProperties": False,
}


def validate(doc, schema, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"{what}{'/' + where if where else ''}: {exc.message}") from None


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def json_arg(text: str) -> dict:
    """Inline JSON, or a path to a JSON file."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid inline JSON ({exc})") from None
    return load_json(text)


def curve_from_spec(spec: dict, n: int | None = None):
    validate(spec, CURVE_SCHEMA, "curve")
    n = int(spec.get("n", n or DEFAULT_N))
    kind = spec["kind"]
    center = tuple(spec.get("center", (0.0, 0.0)))
    angle = float(spec.get("angle", 0.0))
    if kind == "circle":
        return Circle(center, float(spec["radius"]), angle, n)
    if kind == "ellipse":
        return Ellipse(center, float(spec["a"]), float(spec["b"]), angle, n)
    return FourierCurve(np.asarray(spec["cx"], float), np.asarray(spec["cy"], float), n)


def field_from_spec(spec: dict | None, curve) -> PeriodicScalarField:
    if spec is None:
        return PeriodicScalarField.constant(curve, 0.0)
    validate(spec, FIELD_SCHEMA, "field")
    if "values" in spec:
        values = np.asarray(spec["values"], dtype=float)
        if "n" in spec and int(spec["n"]) != len(values):
            raise ConfigError(f"field: n={spec['n']} but {len(values)} values given")
        if len(values) != curve.n:
            raise ConfigError(f"field: {len(values)} values for a curve with n={curve.n}")
        return PeriodicScalarField(curve, values)
    four = spec["fourier"]
    return PeriodicScalarField.from_fourier(curve, four.get("a", [0.0]), four.get("b", []))


def field_to_spec(f: PeriodicScalarField) -> dict:
    return {"n": f.n, "values": f.values.tolist()}


def chart_from_spec(spec: dict) -> Chart:
    curve = curve_from_spec(spec["curve"])
    return Chart.over(curve, spec.get("delta"))


def domain_from_spec(spec: dict) -> DomainRep:
    validate(spec, DOMAIN_SCHEMA, "domain")
    chart = chart_from_spec(spec["chart"])
    return DomainRep(chart, field_from_spec(spec.get("rho"), chart.curve))


def domain_to_spec(dom: DomainRep) -> dict:
    return dom.to_spec()


def group_from_spec(spec: dict) -> GroupElement:
    validate(spec, GROUP_SCHEMA, "group element")
    (kind, value), = spec.items()
    return GroupElement(kind, value)


def flow_config_from_spec(spec: dict) -> FlowConfig:
    out = spec.get("output", {})
    kwargs = {k: spec[k] for k in FLOW_PROPERTIES if k in spec}
    return FlowConfig(snapshot_every=int(out.get("every", 1)), **kwargs)
