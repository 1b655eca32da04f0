"""Configuration loading, merging, and validation, plus the JSON schemas shipped with the repo."""

import json
import sys
from pathlib import Path

import jsonschema
import yaml

from src.errors import EXIT_INPUT_ERROR, MalformedInput

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"

DEFAULTS = {
    "seed": 0,
    "theta_max": 0.05,
    "closure_tolerance": 1e-9,
    "lift_tolerance": 1e-6,
    "pole_candidates": 64,
    "min_pole_clearance": 1e-4,
    "projection_retries": 8,
    "jobs": 1,
    "search": {
        "max_states": 2_000_000,
        "length_slack": 8,
        "quick_depth": 4,
    },
}

POSITIVE_NUMBERS = ["theta_max", "closure_tolerance", "lift_tolerance", "min_pole_clearance"]
INTEGER_RANGES = {
    "seed": 0,
    "pole_candidates": 1,
    "projection_retries": 0,
    "jobs": 1,
}
SEARCH_RANGES = {
    "max_states": 1,
    "length_slack": 0,
    "quick_depth": 0,
}


def load_config(config_path="config.yaml"):
    """Load configuration from a YAML file."""
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


def merge_cli_overrides(config, cli_args):
    """Merge CLI argument overrides into the loaded configuration."""
    overrides = {}
    if cli_args.get("seed") is not None:
        overrides["seed"] = cli_args["seed"]
    if cli_args.get("theta_max") is not None:
        overrides["theta_max"] = cli_args["theta_max"]
    if cli_args.get("jobs") is not None:
        overrides["jobs"] = cli_args["jobs"]

    merged = {**config, **overrides}
    if cli_args.get("budget") is not None:
        merged["search"] = {**(config.get("search") or {}), "max_states": cli_args["budget"]}
    return merged


def _fail(message):
    print(f"ERROR: {message}", file=sys.stderr)
    sys.exit(EXIT_INPUT_ERROR)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def validate_config(config):
    """Fill in defaults and check every value, exiting on errors."""
    search = config.get("search") or {}
    if not isinstance(search, dict):
        _fail("Config field 'search' must be a mapping")
    result = {**DEFAULTS, **config, "search": {**DEFAULTS["search"], **search}}

    for key in POSITIVE_NUMBERS:
        value = result[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            _fail(f"Config field '{key}' must be a positive number, got {value!r}")
    if result["theta_max"] > 1.5:
        _fail(f"Config field 'theta_max' must be at most 1.5 rad, got {result['theta_max']}")

    for key, minimum in INTEGER_RANGES.items():
        if not _is_int(result[key]) or result[key] < minimum:
            _fail(f"Config field '{key}' must be an integer >= {minimum}, got {result[key]!r}")
    for key, minimum in SEARCH_RANGES.items():
        value = result["search"][key]
        if not _is_int(value) or value < minimum:
            _fail(f"Config field 'search.{key}' must be an integer >= {minimum}, got {value!r}")

    return result


def load_schema(name):
    """Read schemas/<name>.json."""
    with open(SCHEMA_DIR / f"{name}.json", "r", encoding="utf-8") as f:
        return json.load(f)


def validate_document(document, name):
    """Check a JSON document against a shipped schema, raising MalformedInput on mismatch."""
    try:
        jsonschema.validate(instance=document, schema=load_schema(name))
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise MalformedInput(f"Invalid {name} JSON at {location}: {e.message}") from e
    return document
