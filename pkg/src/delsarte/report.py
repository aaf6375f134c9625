"""Deterministic JSON reports.

Rationals are written as ``"p/q"`` strings (integers stay integers),
floats are rounded to 15 significant digits, and keys are sorted, so the
same inputs always give the same bytes.
"""
from __future__ import annotations

import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .scheme import EPS_EIG
from .spherical import EPS_DEG, EPS_MOM_PER_POINT, EPS_NORM

SCHEMA = 1


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.15g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()] if obj.dtype != object else [jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    if is_dataclass(obj):
        return jsonable(asdict(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def tolerances() -> dict:
    return {"eigen": EPS_EIG, "sphere_norm": EPS_NORM, "sphere_degree": EPS_DEG,
            "sphere_moment_per_point": EPS_MOM_PER_POINT}


def make_report(command: str, payload: dict, *, number_mode: str | None = None,
                source: dict | None = None) -> dict:
    report = {"schema": SCHEMA, "tool": "delsarte", "version": __version__, "command": command,
              "tolerances": tolerances()}
    if number_mode:
        report["number_mode"] = number_mode
    if source is not None:
        report["input"] = source
    report.update(payload)
    return report


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
