"""JSON report assembly with stable key order."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .exactla import Matrix

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def _plain(obj: Any) -> Any:
    if isinstance(obj, Matrix):
        return _plain(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    return obj


def make_report(command: list[str], checks: list[dict], status: str | None = None,
                timing: float | None = None, **extra) -> dict:
    """``checks`` entries carry at least ``name`` and ``result``."""
    if status is None:
        results = {c["result"] for c in checks}
        status = FAIL if FAIL in results else (INCONCLUSIVE if INCONCLUSIVE in results else PASS)
    rep = {"tool": "cleftgp", "tool_version": __version__, "command": list(command), "status": status,
           "checks": checks, **extra}
    if timing is not None:
        rep["timing_seconds"] = round(timing, 3)
    return _plain(rep)


def check(name: str, result: str | bool, **details) -> dict:
    if isinstance(result, bool):
        result = PASS if result else FAIL
    return {"name": name, "result": result, **details}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


__all__ = ["PASS", "FAIL", "INCONCLUSIVE", "make_report", "check", "dumps"]
