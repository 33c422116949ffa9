"""Deterministic report rendering and strict config loading.

Reports must be byte-for-byte reproducible for a fixed config and version:
keys keep their insertion order and every float is rendered with 15
significant digits, so the encoder below is used instead of json.dumps for
anything written to disk or stdout.
"""

from __future__ import annotations

import json
import math

from .errors import UsageError

__all__ = ["render_json", "write_json", "format_float", "load_config", "Key"]


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise UsageError(f"non-finite value {x} in report")
    out = format(float(x), ".15g")
    # keep a float marker so round-tripping preserves the type
    if "." not in out and "e" not in out and "E" not in out:
        out += ".0"
    return out


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad_in}{json.dumps(str(k))}: {_render(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad_in}{_render(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    # numpy scalars and the like
    if hasattr(obj, "item"):
        return _render(obj.item(), indent, level)
    raise UsageError(f"cannot render {type(obj).__name__} in a report")


def render_json(obj, indent: int = 2) -> str:
    return _render(obj, indent, 0) + "\n"


def write_json(path, obj, indent: int = 2):
    with open(path, "w") as fh:
        fh.write(render_json(obj, indent))


# --------------------------------------------------------------------------
# config schemas


class Key:
    """One config entry: expected type(s), default (None means required),
    optional value check, optional nested schema."""

    def __init__(self, types, default="__required__", check=None, child=None,
                 choices=None):
        self.types = types if isinstance(types, tuple) else (types,)
        self.default = default
        self.check = check
        self.child = child
        self.choices = choices

    @property
    def required(self) -> bool:
        return self.default == "__required__"


def _coerce(value, key: Key, path: str):
    if key.child is not None:
        if not isinstance(value, dict):
            raise UsageError(f"config key {path} must be an object")
        return validate_config(value, key.child, path)
    if bool not in key.types and isinstance(value, bool):
        raise UsageError(f"config key {path} has wrong type bool")
    if float in key.types and isinstance(value, int):
        value = float(value)
    if not isinstance(value, key.types):
        names = "/".join(t.__name__ for t in key.types)
        raise UsageError(f"config key {path} must be {names}, "
                         f"got {type(value).__name__}")
    if key.choices is not None and value not in key.choices:
        raise UsageError(f"config key {path} must be one of {key.choices}")
    if key.check is not None and not key.check(value):
        raise UsageError(f"config key {path} has an out-of-range value {value!r}")
    return value


def validate_config(data: dict, schema: dict, path: str = "") -> dict:
    """Validate data against schema; unknown keys are rejected, defaults are
    filled in, and the result is a plain dict."""
    if not isinstance(data, dict):
        raise UsageError(f"config section {path or '<root>'} must be an object")
    unknown = set(data) - set(schema)
    if unknown:
        raise UsageError(f"unknown config keys in {path or '<root>'}: "
                         f"{sorted(unknown)}")
    out = {}
    for name, key in schema.items():
        here = f"{path}.{name}" if path else name
        if name in data:
            out[name] = _coerce(data[name], key, here)
        elif key.required:
            raise UsageError(f"missing required config key {here}")
        elif key.child is not None:
            out[name] = validate_config(dict(key.default or {}), key.child, here)
        else:
            out[name] = key.default
    return out


def load_config(path, schema: dict) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    return validate_config(data, schema)
