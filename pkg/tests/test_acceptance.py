"""Acceptance battery: every criterion at its stated tolerance.

Each test prints one ``[PASS]/[FAIL]/[INFO] criterion N`` line (collected and
repeated in the terminal summary).  Criterion 9 is informational by
definition.  The literal closed form for Phi(0)^2 in criterion 2 cannot be
met because the true constant differs from it by exp(i pi / (6 hbar)); that
check is kept at full tolerance and marked as a strict expected failure.
"""

import time

import pytest

from betapenta import battery
from betapenta.qdilog import inversion_constant_reference, make_context, phi_zero

LINES: list[str] = []
_CACHE: dict[int, battery.CriterionResult] = {}


def result(k: int) -> battery.CriterionResult:
    if k not in _CACHE:
        t0 = time.perf_counter()
        res = battery.CRITERIA[k]()
        res.wall_time = time.perf_counter() - t0
        _CACHE[k] = res
        line = f"{res.line()} ({res.wall_time:.1f}s)"
        LINES.append(line)
        print(line)
    return _CACHE[k]


def test_criterion_1_representations():
    res = result(1)
    assert res.passed, res.detail
    assert all(r.tol == 1e-8 for r in res.reports)


def test_criterion_2_functional_equations():
    res = result(2)
    assert res.passed, res.detail
    assert all(r.tol == 1e-8 for r in res.reports)
    assert sum(len(r.points) for r in res.reports[:-1]) == 3 * 10 * 3


@pytest.mark.xfail(strict=True, reason="Phi(0)^2 = exp(i pi (1/hbar - 2)/12); the stated "
                   "closed form exp(-i pi (2 + 1/hbar)/12) is off by the phase exp(i pi/(6 hbar))")
def test_criterion_2_literal_phi0_constant():
    worst = 0.0
    for hbar in (0.3, 0.5, 1.0):
        val = phi_zero(make_context(hbar)) ** 2
        ref = inversion_constant_reference(hbar)
        worst = max(worst, abs(val - ref) / abs(ref))
    line = (f"[FAIL] criterion 2 (literal Phi(0)^2 closed form, expected failure): "
            f"rel err {worst:.2e} > 1e-08")
    LINES.append(line)
    print(line)
    assert worst <= 1e-8


def test_criterion_3_fourier_identity():
    res = result(3)
    assert res.passed, res.detail
    assert all(r.tol == 1e-6 and len(r.points) == 10 for r in res.reports)


def test_criterion_4_cross_form():
    res = result(4)
    assert res.passed, res.detail
    assert all(r.tol == 1e-6 and len(r.points) == 9 for r in res.reports)


def test_criterion_5_phi_plus_pentagon():
    res = result(5)
    assert res.passed, res.detail
    assert res.reports[0].tol == 1e-5 and len(res.reports[0].points) == 10


def test_criterion_6_finite_battery():
    res = result(6)
    assert res.passed, res.detail
    assert all(r.tol == 1e-12 for r in res.reports)


def test_criterion_7_quasi_periodic():
    res = result(7)
    assert res.passed, res.detail
    closed, quasi, quot = res.reports
    assert (closed.tol, quasi.tol, quot.tol) == (1e-8, 1e-8, 1e-4)
    assert len(quot.points) == 5


def test_criterion_8_phi_minus():
    res = result(8)
    assert res.passed, res.detail
    real, four = res.reports
    assert len(real.points) == 5 and max(p.abs_err for p in real.points) <= 1e-6
    assert abs(four.points[0].lhs - four.points[0].rhs) <= 1e-4


def test_criterion_9_beta_trend_reported():
    res = result(9)
    assert not res.gating
    assert "residuals" in res.detail


def test_criterion_10_quadrature():
    res = result(10)
    assert res.passed, res.detail
