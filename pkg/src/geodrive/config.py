"""Layered configuration for the controller and safety bounds.

Precedence, lowest to highest: built-in defaults, config file, environment
variables (``ASSIST_`` prefix, key uppercased, e.g. ``ASSIST_MU_R``),
explicit overrides (CLI flags).  The file is either a JSON object or flat
``key = value`` lines; both use the dataclass field names as keys.
"""

from __future__ import annotations

import json
import os
from dataclasses import fields

from .controller import ControllerConfig, SafetyBoundConfig

__all__ = ["CONFIG_KEYS", "ENV_PREFIX", "ConfigError", "coerce_value", "load_config", "parse_config_file"]

ENV_PREFIX = "ASSIST_"

_CONTROLLER_KEYS = tuple(f.name for f in fields(ControllerConfig))
_BOUNDS_KEYS = tuple(f.name for f in fields(SafetyBoundConfig))
CONFIG_KEYS = _CONTROLLER_KEYS + _BOUNDS_KEYS

_INT_KEYS = {"n"}


class ConfigError(Exception):
    """Unreadable, unknown, or invalid configuration input."""


def coerce_value(key: str, value) -> int | float:
    try:
        if key in _INT_KEYS:
            # Accept 3, 3.0, "3"; reject 3.5.
            as_float = float(value)
            as_int = int(as_float)
            if as_int != as_float:
                raise ValueError
            return as_int
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} has non-numeric value {value!r}") from None


def _check_keys(mapping: dict, origin: str) -> None:
    unknown = sorted(set(mapping) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key(s) in {origin}: {', '.join(unknown)}")


def parse_config_file(path) -> dict:
    """Read a config file into a raw key -> value dict."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        return data

    data = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config file {path} line {lineno}: expected 'key = value'")
        data[key.strip()] = value.strip()
    return data


def load_config(
    path=None, env=None, overrides: dict | None = None
) -> tuple[ControllerConfig, SafetyBoundConfig]:
    """Resolve the layered configuration into validated config objects."""
    merged: dict = {}

    if path is not None:
        file_data = parse_config_file(path)
        _check_keys(file_data, f"file {path}")
        merged.update(file_data)

    env = os.environ if env is None else env
    for key in CONFIG_KEYS:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            merged[key] = raw

    if overrides:
        _check_keys(overrides, "overrides")
        merged.update({k: v for k, v in overrides.items() if v is not None})

    values = {key: coerce_value(key, value) for key, value in merged.items()}
    controller_kwargs = {k: v for k, v in values.items() if k in _CONTROLLER_KEYS}
    bounds_kwargs = {k: v for k, v in values.items() if k in _BOUNDS_KEYS}
    try:
        return ControllerConfig(**controller_kwargs), SafetyBoundConfig(**bounds_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
