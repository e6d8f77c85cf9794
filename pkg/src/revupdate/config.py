"""JSON run configuration: schema, validation and loading.

Unknown keys anywhere in a config are rejected so that a mistyped field
can never be silently ignored.
"""

from __future__ import annotations

import json

import jsonschema

from .errors import ConfigError

MODES = ("example1", "example2", "coverage", "posterior", "fisher-table")

TRANSFORM_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["identity", "cube", "power", "poly"]},
        "degree": {"type": "integer", "minimum": 1},
        "coefficients": {"type": "array", "items": {"type": "number"}, "minItems": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "power"}}}, "then": {"required": ["degree"]}},
        {"if": {"properties": {"kind": {"const": "poly"}}}, "then": {"required": ["coefficients"]}},
    ],
}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["gaussian", "binomial", "negbinomial"]},
        "transform": TRANSFORM_SCHEMA,
        "sigma": {"type": "number", "exclusiveMinimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "binomial"}}}, "then": {"required": ["n"]}},
        {"if": {"properties": {"kind": {"const": "negbinomial"}}}, "then": {"required": ["r"]}},
    ],
}

PRIOR_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["combined", "first", "model"]},
        "first": {"type": "integer", "minimum": 0},
        "model": MODEL_SCHEMA,
    },
    "required": ["kind"],
    "additionalProperties": False,
}

THETA_RULE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["fixed", "uniform", "set"]},
        "value": {"type": "number"},
        "low": {"type": "number"},
        "high": {"type": "number"},
        "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "count": {"type": "integer", "minimum": 1},
        "trials_each": {"type": "integer", "minimum": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "fixed"}}}, "then": {"required": ["value"]}},
        {"if": {"properties": {"kind": {"const": "uniform"}}}, "then": {"required": ["low", "high"]}},
        {"if": {"properties": {"kind": {"const": "set"}}}, "then": {"required": ["trials_each"]}},
    ],
}

GRID_SCHEMA = {
    "type": "object",
    "properties": {
        "lower": {"type": "number"},
        "upper": {"type": "number"},
        "num_points": {"type": "integer", "minimum": 2},
    },
    "dependentRequired": {"lower": ["upper"], "upper": ["lower"]},
    "additionalProperties": False,
}

OBSERVED_EXPERIMENT_SCHEMA = {
    "type": "object",
    "properties": {"model": MODEL_SCHEMA, "observation": {"type": "number"}},
    "required": ["model", "observation"],
    "additionalProperties": False,
}

EXAMPLE_OVERRIDES_SCHEMA = {
    "type": "object",
    "properties": {
        "sigma_a": {"type": "number", "exclusiveMinimum": 0},
        "sigma_b": {"type": "number", "exclusiveMinimum": 0},
        "theta_low": {"type": "number"},
        "theta_high": {"type": "number"},
        "n": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "num_values": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

RUN_CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "revupdate run configuration",
    "type": "object",
    "properties": {
        "mode": {"enum": list(MODES)},
        "label": {"type": "string"},
        "output": {"type": "string"},
        "formats": {
            "type": "array", "items": {"enum": ["csv", "svg"]}, "uniqueItems": True,
        },
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "threads": {"type": "integer", "minimum": 1},
        "num_trials": {"type": "integer", "minimum": 1},
        "experiments": {"type": "array"},
        "prior": PRIOR_SCHEMA,
        "true_theta": THETA_RULE_SCHEMA,
        "grid": GRID_SCHEMA,
        "model": MODEL_SCHEMA,
        "models": {"type": "array", "items": MODEL_SCHEMA, "minItems": 1},
        "example": EXAMPLE_OVERRIDES_SCHEMA,
    },
    "required": ["mode"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"mode": {"const": "coverage"}}},
            "then": {
                "required": ["experiments", "true_theta"],
                "properties": {"experiments": {"items": MODEL_SCHEMA, "minItems": 1}},
            },
        },
        {
            "if": {"properties": {"mode": {"const": "posterior"}}},
            "then": {
                "required": ["experiments"],
                "properties": {
                    "experiments": {"items": OBSERVED_EXPERIMENT_SCHEMA, "minItems": 1}
                },
            },
        },
        {
            "if": {"properties": {"mode": {"const": "fisher-table"}}},
            "then": {
                "required": ["grid"],
                "oneOf": [{"required": ["model"]}, {"required": ["models"]}],
            },
        },
    ],
}


def _key_of(error) -> str:
    path = [str(p) for p in error.absolute_path]
    if error.validator == "additionalProperties":
        extra = sorted(set(error.instance) - set(error.schema.get("properties", {})))
        path += extra[:1]
    elif error.validator in ("required", "dependentRequired"):
        missing = [k for k in error.validator_value if k not in error.instance] if isinstance(
            error.validator_value, list) else []
        path += missing[:1]
    return ".".join(path) or "<root>"


def validate_config(config, mode=None) -> dict:
    """Check ``config`` against the schema; raise :class:`ConfigError` naming the key."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object", key="<root>")
    validator = jsonschema.Draft202012Validator(RUN_CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        key = _key_of(err)
        raise ConfigError(f"invalid config at '{key}': {err.message}", key=key)
    if mode is not None and config["mode"] != mode:
        raise ConfigError(
            f"config is for mode {config['mode']!r}, command is {mode!r}", key="mode"
        )
    return config


def load_config(path, mode=None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})", key="<root>") from exc
    return validate_config(config, mode)
