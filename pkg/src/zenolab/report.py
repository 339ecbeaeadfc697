"""Report documents and deterministic file output.

Every JSON the CLI emits follows the packaged report schema
({version, params, results[], pass}); distribution comparisons follow the
companion distribution schema. Files are written atomically (temp + rename)
with fixed key order and no timestamps, so identical configurations produce
byte-identical artifacts.
"""

from __future__ import annotations

import json
import os
import tempfile
from importlib import resources

import jsonschema

from .series import TimeSeries

__all__ = [
    "Check",
    "Report",
    "load_schema",
    "validate_report",
    "validate_distribution_report",
    "write_text_atomic",
    "write_json",
    "write_timeseries_csv",
]

SCHEMA_VERSION = "1"


def load_schema(name: str) -> dict:
    with resources.files("zenolab.schemas").joinpath(name).open("r") as fh:
        return json.load(fh)


def validate_report(doc: dict):
    jsonschema.validate(doc, load_schema("report_schema.json"))


def validate_distribution_report(doc: dict):
    jsonschema.validate(doc, load_schema("distribution_schema.json"))


class Check:
    """One named result row: measured value, target, tolerance, verdict."""

    def __init__(self, name, passed, value=None, target=None, tolerance=None,
                 error=None, details=None):
        self.name = name
        self.passed = bool(passed)
        self.value = value
        self.target = target
        self.tolerance = tolerance
        self.error = error
        self.details = details

    @classmethod
    def against(cls, name, value, target, tolerance, relative=True, details=None):
        """Standard |value − target| (/|target|) <= tolerance check."""
        err = abs(value - target)
        if relative:
            err /= abs(target)
        return cls(name, err <= tolerance, value=value, target=target,
                   tolerance=tolerance, error=float(err), details=details)

    @classmethod
    def bound(cls, name, error, tolerance, details=None):
        """Measured error against an upper bound."""
        return cls(name, error <= tolerance, tolerance=tolerance,
                   error=float(error), details=details)

    def to_dict(self):
        out = {"name": self.name, "pass": self.passed}
        for key in ("value", "target", "tolerance", "error", "details"):
            val = getattr(self, key)
            if val is not None:
                out[key] = _plain(val)
        return out


def _plain(val):
    if isinstance(val, dict):
        return {k: _plain(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [_plain(v) for v in val]
    if hasattr(val, "item"):
        return val.item()
    return val


class Report:
    def __init__(self, kind: str, params: dict):
        self.kind = kind
        self.params = _plain(params)
        self.checks: list[Check] = []

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "kind": self.kind,
            "params": self.params,
            "results": [c.to_dict() for c in self.checks],
            "pass": self.all_pass,
        }

    def write(self, path) -> dict:
        doc = self.to_dict()
        validate_report(doc)
        write_json(path, doc)
        return doc


def write_text_atomic(path, text: str):
    path = os.fspath(path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, doc: dict):
    write_text_atomic(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def write_timeseries_csv(path, series: TimeSeries):
    write_text_atomic(path, series.to_csv_text())
