"""Verification records and their JSON serialisation."""
from __future__ import annotations

import datetime
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__


@dataclass
class VerificationReport:
    """Outcome of one numerical check.

    ``margin`` is signed so that a positive value means the inequality holds
    (bound - measured for upper bounds, measured - bound for lower bounds).
    A ``vacuous`` report carries no information (its bound is meaningless for
    the input) and is ignored by exit-status logic.
    """

    check: str
    surface: str
    measured: float
    bound: float
    margin: float
    passed: bool
    params: dict[str, Any] = field(default_factory=dict)
    resolution: dict[str, Any] = field(default_factory=dict)
    vacuous: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "surface": self.surface,
            "params": _jsonable(self.params),
            "measured": _num(self.measured),
            "bound": _num(self.bound),
            "margin": _num(self.margin),
            "resolution": _jsonable(self.resolution),
            "pass": bool(self.passed),
            "vacuous": bool(self.vacuous),
            "details": _jsonable(self.details),
        }

    def summary(self) -> str:
        status = "VACUOUS" if self.vacuous else ("PASS" if self.passed else "FAIL")
        return (
            f"[{status}] {self.check} on {self.surface}: measured={self.measured:.6g} "
            f"bound={self.bound:.6g} margin={self.margin:.3g}"
        )


def upper_bound_report(check, surface, measured, bound, **kw) -> VerificationReport:
    return VerificationReport(check, surface, measured, bound, bound - measured, measured < bound, **kw)


def lower_bound_report(check, surface, measured, bound, **kw) -> VerificationReport:
    return VerificationReport(check, surface, measured, bound, measured - bound, measured >= bound, **kw)


def _num(x):
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, complex):
        return [_num(obj.real), _num(obj.imag)]
    try:
        return _num(obj)
    except (TypeError, ValueError):
        return str(obj)


def all_passed(reports: list[VerificationReport]) -> bool:
    return all(r.passed for r in reports if not r.vacuous)


def reports_document(reports: list[VerificationReport], timestamp: bool = True) -> dict[str, Any]:
    doc: dict[str, Any] = {"version": __version__}
    if timestamp:
        doc["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    doc["all_pass"] = all_passed(reports)
    doc["reports"] = [r.to_dict() for r in reports]
    return doc


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_reports(reports: list[VerificationReport], path: str | Path, timestamp: bool = True) -> None:
    text = json.dumps(reports_document(reports, timestamp), indent=2, sort_keys=False) + "\n"
    atomic_write_text(path, text)
