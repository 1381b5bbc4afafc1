"""Model/config file parsing and deterministic report serialization.

Model files are JSON: {"n": int, "W": row-major nested array,
"nonlinearity": {"kind": "tanh" | "logistic" | "identity"}}. Experiment
configs are JSON objects whose fields depend on the subcommand (see cli).
Reports are JSON (sorted keys) or CSV with a schema_version marker; float
serialization uses Python's shortest round-trip repr, so identical inputs
produce byte-identical reports and values re-parse exactly.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from . import nonlinearity as nlmod
from .dynamics import RnnModel
from .errors import ConfigError

SCHEMA_VERSION = "1"


def load_model(path) -> RnnModel:
    """Parse and validate a model file."""
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise ConfigError(path, "<root>", "model file must be a JSON object")
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(path, "n", f"must be a positive integer, got {n!r}")
    W = raw.get("W")
    if not isinstance(W, list) or len(W) != n:
        raise ConfigError(path, "W", f"must be a list of {n} rows")
    for i, row in enumerate(W):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(path, "W", f"row {i} is ragged (expected {n} entries)")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
                raise ConfigError(path, "W", f"entry ({i},{j}) is not a finite number: {v!r}")
    nl_raw = raw.get("nonlinearity")
    if not isinstance(nl_raw, dict) or "kind" not in nl_raw:
        raise ConfigError(path, "nonlinearity", 'must be an object like {"kind": "tanh"}')
    try:
        nl = nlmod.from_dict(nl_raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, "nonlinearity", str(exc)) from exc
    return RnnModel(W=np.array(W, dtype=float), nl=nl)


def save_model(model: RnnModel, path) -> None:
    """Write a model file that re-parses to an identical model."""
    doc = {
        "n": model.n,
        "W": [[float(v) for v in row] for row in model.W],
        "nonlinearity": nlmod.to_dict(model.nl),
    }
    with open(path, "w") as fh:
        fh.write(dumps_json(doc))


def load_config(path) -> "ConfigView":
    raw = _load_json(path)
    if not isinstance(raw, dict):
        raise ConfigError(path, "<root>", "config file must be a JSON object")
    return ConfigView(raw, path)


class ConfigView:
    """Typed accessors over a raw config dict; errors carry path + field."""

    def __init__(self, raw: dict, path):
        self.raw = raw
        self.path = path

    def fail(self, field, message):
        raise ConfigError(self.path, field, message)

    def string(self, field, default=None, required=False):
        v = self._get(field, default, required)
        if v is not None and not isinstance(v, str):
            self.fail(field, f"must be a string, got {type(v).__name__}")
        return v

    def integer(self, field, default=None, required=False, minimum=None):
        v = self._get(field, default, required)
        if v is None:
            return None
        if not isinstance(v, int) or isinstance(v, bool):
            self.fail(field, f"must be an integer, got {v!r}")
        if minimum is not None and v < minimum:
            self.fail(field, f"must be >= {minimum}, got {v}")
        return v

    def number(self, field, default=None, required=False):
        v = self._get(field, default, required)
        if v is None:
            return None
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
            self.fail(field, f"must be a finite number, got {v!r}")
        return float(v)

    def vector(self, field, n, default=None, required=False):
        v = self._get(field, None, required)
        if v is None:
            return default
        if not isinstance(v, list) or len(v) != n:
            self.fail(field, f"must be a list of {n} numbers")
        for i, x in enumerate(v):
            if not isinstance(x, (int, float)) or isinstance(x, bool) or not np.isfinite(x):
                self.fail(field, f"entry {i} is not a finite number: {x!r}")
        return np.array(v, dtype=float)

    def rows(self, field, default=None, required=False):
        v = self._get(field, default, required)
        if v is not None and not isinstance(v, list):
            self.fail(field, "must be a list")
        return v

    def _get(self, field, default, required):
        if field in self.raw:
            return self.raw[field]
        if required:
            self.fail(field, "missing required field")
        return default


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(path, "<file>", f"cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(path, "<file>", f"invalid JSON: {exc}") from exc


def to_plain(obj):
    """Recursively convert numpy containers/scalars to JSON-ready types."""
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def complex_pair(z) -> list:
    """Serialize a complex number as [re, im]."""
    z = complex(z)
    return [z.real, z.imag]


def dumps_json(report: dict) -> str:
    """Deterministic JSON text: sorted keys, two-space indent."""
    return json.dumps(to_plain(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def dumps_csv(header: list, rows: list) -> str:
    """Deterministic CSV text with a schema_version comment line."""
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v
