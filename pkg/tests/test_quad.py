import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betapenta.errors import DomainError, NonConvergent
from betapenta.quad import Contour, QuadResult, integrate_2d, integrate_contour, integrate_line


def gauss(x):
    return np.exp(-np.pi * x * x)


def test_gaussian_normalisation():
    r = integrate_line(gauss, tol=1e-12, decay=1.0)
    assert abs(r.value - 1) <= max(r.err_estimate, 1e-15)
    assert r.evaluations >= 1 and r.err_estimate >= 0


def test_unit_interval():
    r = integrate_line(lambda x: np.ones_like(x), 0.0, 1.0)
    assert abs(r.value - 1) < 1e-14


def test_regularised_fresnel_matches_closed_form():
    # int e^{(i pi - eps) x^2} dx = sqrt(pi / (eps - i pi))
    for eps in (1.0, 0.3):
        r = integrate_line(lambda x: np.exp((1j * np.pi - eps) * x * x), tol=1e-11, decay=1.0)
        assert abs(r.value - cmath.sqrt(math.pi / (eps - 1j * math.pi))) < 1e-10


def test_fresnel_by_rotated_contour():
    d = cmath.exp(0.25j * math.pi)
    c = Contour((0j,), -d, d, 1.0, 1.0)
    r = integrate_contour(lambda z: np.exp(1j * np.pi * z * z), c, tol=1e-12)
    assert abs(r.value - d) < 1e-11


def test_segment_and_shifted_line():
    assert abs(integrate_contour(lambda z: z, Contour.segment(0, 1)).value - 0.5) < 1e-15
    r = integrate_contour(lambda z: np.exp(-np.pi * z * z), Contour.horizontal(0.1, 1.0), tol=1e-12)
    assert abs(r.value - 1) < 1e-11


def test_polyline_contour_around_origin():
    # 1/z around a closed square gives 2 pi i
    pts = (1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j)
    c = Contour(pts)
    assert abs(integrate_contour(lambda z: 1 / z, c, tol=1e-12).value - 2j * math.pi) < 1e-10


def test_2d_fixtures():
    r = integrate_2d(lambda x, y: np.exp(-np.pi * (x * x + y * y)),
                     (-math.inf, math.inf), (-math.inf, math.inf), tol=1e-10,
                     xdecay=1.0, ydecay=1.0)
    assert abs(r.value - 1) < 1e-9
    r = integrate_2d(lambda x, y: np.ones_like(x), (0, 1), (0, 1))
    assert abs(r.value - 1) < 1e-13


def test_zero_length_window():
    r = integrate_line(lambda x: 1 / x, 2.0, 2.0)
    assert r.value == 0 and r.err_estimate == 0


def test_reversed_limits_flip_sign():
    a = integrate_line(lambda x: x * x, 0.0, 2.0).value
    b = integrate_line(lambda x: x * x, 2.0, 0.0).value
    assert abs(a + b) < 1e-14 and abs(a - 8 / 3) < 1e-13


def test_non_decaying_tail_rejected():
    with pytest.raises(NonConvergent):
        integrate_line(lambda x: np.exp(1j * x), tol=1e-8, decay=1.0)


def test_missing_decay_rejected():
    with pytest.raises(NonConvergent):
        integrate_line(gauss, 0.0, math.inf)


def test_domain_error_on_nonfinite():
    with pytest.raises(DomainError):
        integrate_line(lambda x: np.where(x > 0.3, np.nan, 1.0), 0.0, 1.0)


def test_domain_error_on_throw():
    def bad(x):
        raise ValueError("boom")
    with pytest.raises(DomainError):
        integrate_line(bad, 0.0, 1.0)


def test_contour_invariants():
    with pytest.raises(ValueError):
        Contour((0j,))
    with pytest.raises(ValueError):
        Contour((0j,), None, 1 + 0j, None, 0.0)
    with pytest.raises(ValueError):
        QuadResult(0j, -1.0, 1)


def test_bad_tolerance():
    with pytest.raises(ValueError):
        integrate_line(gauss, 0, 1, tol=0.0)


@given(st.floats(-1, 1))
def test_contour_shift_invariance(c):
    r = integrate_contour(lambda z: np.exp(-np.pi * z * z), Contour.horizontal(c, 1.0), tol=1e-11)
    assert abs(r.value - 1) < 1e-9


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 3))
def test_linearity(alpha, beta, w):
    f = lambda x: np.exp(-w * x * x)
    g = lambda x: np.cos(x) * np.exp(-np.abs(x))
    rf = integrate_line(f, tol=1e-11, decay=1.0)
    rg = integrate_line(g, tol=1e-11, decay=1.0)
    rs = integrate_line(lambda x: alpha * f(x) + beta * g(x), tol=1e-11, decay=1.0)
    bound = rs.err_estimate + abs(alpha) * rf.err_estimate + abs(beta) * rg.err_estimate
    assert abs(rs.value - alpha * rf.value - beta * rg.value) <= bound + 1e-13


@pytest.mark.parametrize("f", [gauss, lambda x: 1 / (1 + x * x) ** 2 * np.exp(-0.1 * np.abs(x))])
def test_refinement_monotonicity(f):
    ests = [integrate_line(f, tol=t, decay=0.1).err_estimate for t in (1e-4, 1e-6, 1e-8, 1e-10)]
    assert all(b <= a for a, b in zip(ests[:-1], ests[1:]))
