import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betapenta import automorphic as am
from betapenta import pentagon as pt
from betapenta.errors import AutomorphicityViolation, InvalidHomomorphism, NonConvergent
from betapenta.lca import CIRCLE, INTEGERS, REALS
from betapenta.qdilog import Dilog, make_context


@pytest.fixture(scope="module")
def ctx():
    return make_context(0.5)


@pytest.fixture(scope="module")
def imp(ctx):
    return pt.imp_family(ctx, Dilog(ctx))


@pytest.fixture(scope="module")
def lifted(imp):
    return am.lift_theorem1(imp, am.make_data())


def test_trivial_data():
    d = am.make_data()
    assert d.gamma == (1, 1, 1, 1, 1) and d.mu == (1, 1, 1, 1, 1)
    assert (d.ambient.kind, d.subgroup.kind, d.quotient.kind) == (REALS, INTEGERS, CIRCLE)
    for m in range(-4, 5):
        assert d.eps(m) == pytest.approx((-1) ** m)


def test_non_integer_c_rejected():
    with pytest.raises(InvalidHomomorphism):
        am.make_data(c=0.5)


def test_non_unit_values_rejected():
    with pytest.raises(ValueError):
        am.make_data(g0=2.0)


unit = st.floats(0, 2 * math.pi).map(lambda t: cmath.exp(1j * t))


@given(unit, unit, unit, unit, unit, st.integers(-3, 3))
def test_derived_characters(g0, g1, g2, a, b, c):
    d = am.make_data(g0, g1, a, b, c, g2=g2)
    G, M = d.gamma, d.mu
    assert G[1] == pytest.approx(G[0] * G[2]) and G[3] == pytest.approx(G[2] * G[4])
    assert M[1] == pytest.approx(a) and M[3] == pytest.approx(b)
    assert M[2] == pytest.approx(a * b * G[0] * G[2] * G[4])
    assert M[0] == pytest.approx(a * G[3]) and M[4] == pytest.approx(b * G[1])
    for m, n in [(1, 1), (2, -3), (4, 5)]:
        assert d.h(m, n) * d.h(n, m) == pytest.approx(1)
        assert d.eps(m + n) == pytest.approx(d.eps(m) * d.eps(n))


def test_automorphicity_checked(imp, ctx):
    assert am.check_automorphic(imp, am.make_data(), [(0.2 + 0.05j, -0.1 - 0.02j)]) < 1e-10
    with pytest.raises(AutomorphicityViolation):
        am.lift_theorem1(pt.phi_plus_family(ctx), am.make_data(),
                         check_points=[(0.2 + 0.3j, -0.1 - 0.05j)])


def test_lift_series_form(lifted, ctx):
    # psi(x, y) = e^{-i pi x y} sum_m (F Phi)(y + m) e^{-2 pi i (x + 1/2) m}, up to the constant
    x, y = 0.2 + 0.3 * ctx.cb * 1j, -0.1 - 0.1 * ctx.cb * 1j
    D = Dilog(ctx)
    const = cmath.exp(1j * math.pi * (1 + 1 / ctx.hbar) / 12)
    ms = np.arange(-400, 401)
    terms = (np.exp(-1j * np.pi * (y + ms) ** 2) * D.phi(y + ms + 1j * ctx.cb)
             * np.exp(-2j * np.pi * (x + 0.5) * ms))
    want = np.exp(-1j * np.pi * x * y) * const * np.sum(terms)
    assert lifted.psi(0, x, y) == pytest.approx(want, rel=1e-10)


def test_zero_family_lifts_to_zero():
    zero = pt.PentagonFamily(pt.REAL_LINE, (lambda x, y: 0 * np.asarray(x) * np.asarray(y),) * 5,
                             "closed-form", "zero")
    q = am.lift_theorem1(zero, am.make_data())
    assert q.psi(0, 0.3 + 0.1j, -0.2) == 0
    rep = am.verify_eq11(q, [pt.SamplePoint(0.1, 0.2, 0.3, 0.4)], 1e-12)
    assert rep.points[0].lhs == 0 and rep.points[0].rhs == 0


def test_tail_bound_controls_truncation(lifted, ctx):
    x, y = 0.1 + 0.3 * ctx.cb * 1j, 0.2 - 0.1 * ctx.cb * 1j
    full = lifted.evaluate(1, x, y)
    coarse = am.QuotientFamily(lifted.base, lifted.data, tol=1e-6).evaluate(1, x, y)
    assert abs(full.value - coarse.value) <= coarse.tail_bound + full.tail_bound + 1e-14


def test_real_arguments_need_regulator(lifted):
    with pytest.raises(NonConvergent):
        am.QuotientFamily(lifted.base, lifted.data, max_terms=300).evaluate(0, 0.1, 0.2)


def test_policies_agree_in_strip(imp, ctx):
    s = am.lift_theorem1(imp, am.make_data(), am.STRIP)
    r = am.lift_theorem1(imp, am.make_data(), am.REGULATOR)
    x, y = 0.1 + 0.3 * ctx.cb * 1j, -0.2 - 0.1 * ctx.cb * 1j
    a, b = s.evaluate(2, x, y), r.evaluate(2, x, y)
    assert abs(a.value - b.value) <= a.tail_bound + b.tail_bound
    assert b.tail_bound < 1e-6 * abs(a.value)


def test_quasiperiodicity_ratios(lifted, ctx):
    x, y = 0.15 + 0.3 * ctx.cb * 1j, -0.25 - 0.1 * ctx.cb * 1j
    base = lifted.psi(0, x, y)
    assert lifted.psi(0, x + 1, y) / base == pytest.approx(cmath.exp(-1j * math.pi * y), rel=1e-8)
    assert lifted.psi(0, x, y + 1) / base == pytest.approx(-cmath.exp(1j * math.pi * x), rel=1e-8)
    rep = am.verify_quasiperiodicity(lifted, [(x, y)], 1e-8, shifts=(0, 1, -1, 2))
    assert rep.passed, rep.summary_line()
    zero = [p for p in rep.points if p.inputs["b"] == 0]
    assert all(p.abs_err == 0 for p in zero)


def test_fourier_twist_shift_law(imp, ctx):
    data = am.make_data()
    x, y = 0.2 + 0.3 * ctx.cb * 1j, -0.1 - 0.1 * ctx.cb * 1j
    for b in (1, 2, -1):
        assert am.fourier_twist_defect(imp, data, 0, x, y, cmath.exp(0.7j), b) < 1e-8


def test_quotient_pentagon_and_periodicity(lifted):
    samples = am.quotient_samples(np.random.default_rng(3), 2, 0.5)
    rep = am.verify_eq11(lifted, samples, 1e-4, periodicity_tol=1e-8)
    assert rep.passed, rep.summary_line()
    for p in rep.points:
        assert p.inputs["periodicity_defect"] <= 1e-8


def test_lift_requires_reals():
    from betapenta.lca import CYCLIC, Group
    with pytest.raises(ValueError):
        am.lift_theorem1(pt.constant_solution(Group(CYCLIC, 3)), am.make_data())
