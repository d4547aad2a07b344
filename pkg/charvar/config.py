"""Configuration schemas and loading for charvar."""

from __future__ import annotations

import json
import os
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

import voluptuous as vol
import yaml
from voluptuous.humanize import humanize_error

from .const import (
    CONF_COUNT,
    CONF_DEFAULT,
    CONF_FORMAT,
    CONF_LOGGER,
    CONF_LOGS,
    CONF_SEED,
    CONF_TOLERANCE,
    CONF_WORKERS,
    DEFAULT_FORMAT,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_WORKERS,
    ENV_TOLERANCE,
    FIELD_COMPACT,
    FIELD_COMPLEX,
    FORMAT_JSON,
    FORMAT_TEXT,
    LOGGER,
)
from .exceptions import ConfigError

LOG_LEVELS = ("debug", "info", "warning", "error", "critical")


def fraction(value: Any) -> Fraction:
    """Validate a rational number given as int or 'p/q' text."""
    if isinstance(value, bool) or isinstance(value, float):
        raise vol.Invalid(f"expected an exact rational, got {value!r}")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exception:
        raise vol.Invalid(f"invalid rational {value!r}") from exception


def positive_float(value: Any) -> float:
    """Validate a strictly positive float."""
    number = vol.Coerce(float)(value)
    if not number > 0:
        raise vol.Invalid(f"expected a positive number, got {value!r}")
    return number


LOG_LEVEL = vol.All(str, vol.Lower, vol.In(LOG_LEVELS))

LOGGER_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_DEFAULT, default="warning"): LOG_LEVEL,
        vol.Optional(CONF_LOGS, default={}): {str: LOG_LEVEL},
    }
)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_TOLERANCE): positive_float,
        vol.Optional(CONF_SEED): vol.All(int, vol.Range(min=0)),
        vol.Optional(CONF_COUNT): vol.All(int, vol.Range(min=1)),
        vol.Optional(CONF_WORKERS): vol.All(int, vol.Range(min=1)),
        vol.Optional(CONF_FORMAT): vol.In([FORMAT_JSON, FORMAT_TEXT]),
        vol.Optional(CONF_LOGGER, default={}): LOGGER_SCHEMA,
    }
)

CENTRAL_GENERATOR_SCHEMA = vol.Schema(
    {
        vol.Optional("torus", default=[]): [fraction],
        vol.Optional("factors", default=[]): [vol.Any(int, str, [int])],
        vol.Required("order"): vol.All(int, vol.Range(min=1)),
    }
)

DESCRIPTOR_SCHEMA = vol.Schema(
    {
        vol.Required("field"): vol.In([FIELD_COMPACT, FIELD_COMPLEX]),
        vol.Optional("torus_rank", default=0): vol.All(int, vol.Range(min=0)),
        vol.Optional("factors", default=[]): [str],
        vol.Optional("central_generators", default=[]): [CENTRAL_GENERATOR_SCHEMA],
    }
)

COMPLEX_ENTRY = vol.ExactSequence([vol.Coerce(float), vol.Coerce(float)])
MATRIX = [[COMPLEX_ENTRY]]

MATRIX_REP_SCHEMA = vol.Schema(
    {
        vol.Required("target"): str,
        vol.Optional("n"): vol.All(int, vol.Range(min=1)),
        vol.Optional("tolerance"): positive_float,
        vol.Required("generators"): [str],
        vol.Required("matrices"): [MATRIX],
    }
)

LIFTED_REP_SCHEMA = vol.Schema(
    {
        vol.Required("target"): str,
        vol.Optional("n"): vol.All(int, vol.Range(min=1)),
        vol.Optional("tolerance"): positive_float,
        vol.Required("generators"): [str],
        vol.Required("real_parts"): [vol.Coerce(float)],
        vol.Required("su_parts"): [MATRIX],
    }
)


def validate(schema: vol.Schema, data: Any, source: str) -> Any:
    """Validate data against schema, raising ConfigError with a readable message."""
    try:
        return schema(data)
    except vol.Invalid as exception:
        msg = f"{source}: {humanize_error(data, exception)}"
        raise ConfigError(msg) from exception


def read_text(path: str | Path) -> str:
    """Read a UTF-8 text file, raising ConfigError when it cannot be read."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exception:
        raise ConfigError(f"Cannot read {path}: {exception.strerror}") from exception


def load_yaml(path: str | Path) -> Any:
    """Read a YAML file with safe_load."""
    try:
        return yaml.safe_load(read_text(path))
    except yaml.YAMLError as exception:
        raise ConfigError(f"Invalid YAML in {path}: {exception}") from exception


def load_json(path: str | Path) -> Any:
    """Read a JSON file."""
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as exception:
        msg = f"Invalid JSON in {path} (line {exception.lineno}): {exception.msg}"
        raise ConfigError(msg) from exception


def load_config(path: str | Path | None) -> dict[str, Any]:
    """Load and validate a run config file; None gives the empty config."""
    if path is None:
        return CONFIG_SCHEMA({})
    return validate(CONFIG_SCHEMA, load_yaml(path) or {}, str(path))


def resolve_settings(
    cli_values: Mapping[str, Any],
    file_config: Mapping[str, Any],
    environ: Mapping[str, str] | None = None,
) -> dict[str, Any]:
    """Merge settings: CLI flag, then CHARVAR_TOL (tolerance only), then file, then defaults."""
    environ = os.environ if environ is None else environ
    defaults = {
        CONF_TOLERANCE: DEFAULT_TOLERANCE,
        CONF_SEED: DEFAULT_SEED,
        CONF_COUNT: None,
        CONF_WORKERS: DEFAULT_WORKERS,
        CONF_FORMAT: DEFAULT_FORMAT,
    }
    settings = {
        key: file_config.get(key, default) for key, default in defaults.items()
    }
    if ENV_TOLERANCE in environ:
        try:
            settings[CONF_TOLERANCE] = positive_float(environ[ENV_TOLERANCE])
        except vol.Invalid as exception:
            msg = f"{ENV_TOLERANCE}={environ[ENV_TOLERANCE]!r} is not a positive number"
            raise ConfigError(msg) from exception
        LOGGER.warning(
            "Tolerance overridden from %s: %s", ENV_TOLERANCE, settings[CONF_TOLERANCE]
        )
    for key in defaults:
        if cli_values.get(key) is not None:
            settings[key] = cli_values[key]
    return settings
