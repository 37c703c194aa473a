"""Experiment configuration documents for the command line tools.

A config is a JSON object validated against :data:`CONFIG_SCHEMA` before any
work starts. Omitted fields take the defaults below.
"""
from __future__ import annotations

import copy
import json

import jsonschema

from .trainer import DEFAULT_LRS

_pos_int = {"type": "integer", "minimum": 1}
_frac = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "paretogan experiment",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "variant": {"enum": ["uniform", "normal", "lognormal", "pareto"]},
        "seed": {"type": "integer"},
        "gamma": {"oneOf": [{"type": "number", "minimum": 1}, {"const": "auto"}]},
        "net": {
            "type": "object", "additionalProperties": False,
            "properties": {"noise_dim": _pos_int,
                           "hidden_widths": {"type": "array", "items": _pos_int, "minItems": 1}},
        },
        "tail": {
            "type": "object", "additionalProperties": False,
            "properties": {"side": {"enum": ["positive", "negative", "magnitude"]},
                           "k": {"oneOf": [_pos_int, {"type": "null"}]}},
        },
        "train": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "batch_size": {"type": "integer", "minimum": 2},
                "iterations": _pos_int,
                "learning_rates": {"type": "array", "minItems": 1,
                                   "items": {"type": "number", "exclusiveMinimum": 0}},
                "validation_every": _pos_int,
                "val_noise_size": {"type": "integer", "minimum": 2},
                "fractions": {"type": "array", "items": _frac, "minItems": 2, "maxItems": 2},
            },
        },
        "data": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "csv": {"type": "string"},
                "columns": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "delimiter": {"type": "string", "minLength": 1, "maxLength": 1},
                "synth": {
                    "type": "object", "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["cauchy-mixture", "joint2d", "manifold"]},
                        "n": _pos_int, "seed": {"type": "integer"},
                        "c": _pos_int, "d": _pos_int,
                        "locations": {"type": "array", "items": {"type": "number"}},
                        "scales": {"type": "array", "items": {"type": "number",
                                                              "exclusiveMinimum": 0}},
                        "weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
                    },
                },
            },
            "oneOf": [{"required": ["csv"]}, {"required": ["synth"]}],
        },
        "eval": {
            "type": "object", "additionalProperties": False,
            "properties": {"n_generated": {"oneOf": [_pos_int, {"type": "null"}]}},
        },
        "out": {"type": "string"},
    },
    "required": ["data"],
}

DEFAULTS = {
    "variant": "pareto",
    "seed": 0,
    "gamma": "auto",
    "net": {"noise_dim": 4, "hidden_widths": [32, 32, 32]},
    "tail": {"side": "magnitude", "k": None},
    "train": {"batch_size": 256, "iterations": 20000, "learning_rates": list(DEFAULT_LRS),
              "validation_every": 500, "val_noise_size": 4096, "fractions": [0.05, 0.05]},
    "eval": {"n_generated": None},
}


class ConfigError(ValueError):
    pass


def validate(cfg: dict) -> None:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"invalid config at {list(exc.absolute_path)}: {exc.message}") from exc


def with_defaults(cfg: dict) -> dict:
    validate(cfg)
    out = copy.deepcopy(DEFAULTS)
    for key, val in cfg.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key].update(copy.deepcopy(val))
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return with_defaults(cfg)
