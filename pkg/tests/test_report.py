import csv
import io
import json
import math
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from betapenta.report import (PointRecord, VerificationReport, complex_from_json,
                              relative_residual)

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())


def validate(doc):
    jsonschema.validate(doc, SCHEMA)


def test_relative_residual():
    assert relative_residual(1, 1) == (0, 0)
    a, r = relative_residual(2, 1)
    assert a == 1 and r == 0.5
    assert relative_residual(0, 0) == (0, 0.0)
    # magnitude scale suppresses roundoff-sized zeros
    assert relative_residual(1e-16, 0, scale=1.0)[1] == pytest.approx(1e-16)


def make_report(tol=1e-6):
    rep = VerificationReport("demo", {"hbar": 0.5, "z": 1 + 2j}, tol)
    rep.points.append(PointRecord.compare({"x": 0.1 + 0.2j}, 1 + 1j, 1 + 1j + 1e-9))
    rep.points.append(PointRecord.compare({"x": np.float64(0.3)}, 2.0, 2.0))
    return rep


def test_pass_invariant():
    rep = make_report()
    assert rep.passed and rep.max_rel_err < 1e-6
    rep.tol = 1e-12
    assert not rep.passed
    rep = make_report()
    rep.points.append(PointRecord.failed({"x": 0}, ValueError("bad")))
    assert not rep.passed and rep.errors == ["ValueError: bad"]
    assert not VerificationReport("empty", {}, 1.0).passed


def test_json_round_trip_and_schema():
    rep = make_report()
    doc = json.loads(rep.to_json())
    validate(doc)
    assert doc["params"]["z"] == {"re": 1.0, "im": 2.0}
    assert complex_from_json(doc["points"][0]["lhs"]) == 1 + 1j
    assert doc["pass"] is True and doc["schema"] == 1


def test_json_handles_nan():
    rep = VerificationReport("demo", {}, 1.0)
    rep.points.append(PointRecord.failed({"x": math.nan}, RuntimeError("x")))
    doc = json.loads(rep.to_json())
    validate(doc)
    assert doc["max_rel_err"] is None


def test_csv_flattening():
    rep = make_report()
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0][:1] == ["x"] and "rel_err" in rows[0]
    assert len(rows) == 3
    assert complex(rows[1][0]) == 0.1 + 0.2j
    assert float(rows[1][rows[0].index("lhs_re")]) == 1.0


def test_summary_line():
    line = make_report().summary_line()
    assert line.startswith("PASS demo: 2 points")
