"""Verification reports and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA_VERSION = 1


def relative_residual(lhs: complex, rhs: complex, scale: float = 0.0) -> tuple[float, float]:
    """(abs_err, rel_err); the relative error is scaled by max(|lhs|, |rhs|, scale).

    ``scale`` lets callers supply the magnitude of the terms that cancel
    (e.g. the sum of absolute values), so exact zeros are not compared
    relative to roundoff.
    """
    a = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs), scale)
    return a, (a / scale if scale > 0 else 0.0)


@dataclass
class PointRecord:
    inputs: dict[str, Any]
    lhs: complex | None = None
    rhs: complex | None = None
    abs_err: float | None = None
    rel_err: float | None = None
    quad_err: float = 0.0
    error: str | None = None

    def __post_init__(self):
        if self.lhs is not None:
            self.lhs = complex(self.lhs)
        if self.rhs is not None:
            self.rhs = complex(self.rhs)

    @classmethod
    def compare(cls, inputs, lhs, rhs, quad_err=0.0, scale=0.0) -> "PointRecord":
        a, r = relative_residual(complex(lhs), complex(rhs), scale)
        return cls(inputs, complex(lhs), complex(rhs), a, r, float(quad_err))

    @classmethod
    def failed(cls, inputs, exc: Exception) -> "PointRecord":
        return cls(inputs, error=f"{type(exc).__name__}: {exc}")


@dataclass
class VerificationReport:
    suite: str
    params: dict[str, Any]
    tol: float
    points: list[PointRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def max_rel_err(self) -> float:
        errs = [p.rel_err for p in self.points if p.rel_err is not None]
        return max(errs) if errs else math.nan

    @property
    def max_abs_err(self) -> float:
        errs = [p.abs_err for p in self.points if p.abs_err is not None]
        return max(errs) if errs else math.nan

    @property
    def errors(self) -> list[str]:
        return [p.error for p in self.points if p.error]

    @property
    def passed(self) -> bool:
        if not self.points or self.errors:
            return False
        return self.max_rel_err <= self.tol

    def extend(self, other: "VerificationReport") -> None:
        self.points.extend(other.points)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "params": _jsonable(self.params),
            "tol": self.tol,
            "points": [_jsonable(p.__dict__) for p in self.points],
            "max_rel_err": _num(self.max_rel_err),
            "pass": bool(self.passed),
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        keys = sorted({k for p in self.points for k in p.inputs})
        w.writerow(keys + ["lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err",
                           "rel_err", "quad_err", "error"])
        for p in self.points:
            row = [_flat(p.inputs.get(k)) for k in keys]
            for v in (p.lhs, p.rhs):
                row += ["", ""] if v is None else [repr(v.real), repr(v.imag)]
            row += [_flat(p.abs_err), _flat(p.rel_err), _flat(p.quad_err), p.error or ""]
            w.writerow(row)
        return buf.getvalue()

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.suite}: {len(self.points)} points, "
                f"max_rel_err={self.max_rel_err:.3e} (tol {self.tol:.1e})"
                + (f", {len(self.errors)} errors" if self.errors else ""))


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    return obj


def _flat(v):
    if v is None:
        return ""
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return repr(v) if isinstance(v, float) else str(v)


def complex_from_json(d) -> complex:
    return complex(d["re"], d["im"])
