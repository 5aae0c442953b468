import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betapenta import faddeev as fd
from betapenta import pentagon as pt
from betapenta.errors import OutsideStrip, PoleHit
from betapenta.lca import CYCLIC, Group
from betapenta.qdilog import Dilog, make_context
from scipy.special import gamma


@pytest.fixture(scope="module")
def ctx():
    return make_context(0.5)


@pytest.fixture(scope="module")
def D(ctx):
    return Dilog(ctx)


@pytest.fixture(scope="module")
def phi_t(ctx, D):
    return fd.make_phi(ctx, D)


@pytest.fixture(scope="module")
def constructed_plus(phi_t):
    return pt.construct_theorem2(phi_t, phi_t)


def brute(fam, x, y, u, v):
    n = fam.group.n
    w = fam.group.measure_scale
    lhs = fam(1, x, y) * fam(3, u, v)
    rhs = 0
    for z in range(n):
        rhs += fam(4, u + y, v - z) * fam(2, x + y + u + v - z, z) * fam(0, x + v, y - z) * w
    return lhs, rhs


# finite groups ---------------------------------------------------------------

def test_constant_solution_values():
    assert pt.tabulate(pt.constant_solution(Group(CYCLIC, 1)))[0, 0, 0] == 1
    fam = pt.constant_solution(Group(CYCLIC, 4))
    lhs, rhs, _, _ = pt.pentagon_sides(fam, pt.SamplePoint(1, 2, 3, 0))
    assert lhs == pytest.approx(1 / 16) and rhs == pytest.approx(1 / 16)
    with pytest.raises(ValueError):
        pt.constant_solution(Group("reals"))


def test_constant_solution_with_scaled_measure():
    g = Group(CYCLIC, 5, 0.5)
    fam = pt.constant_solution(g)
    rep = pt.verify_pentagon(fam, pt.finite_samples(g, np.random.default_rng(0), 5), 1e-12)
    assert rep.passed


@given(st.integers(1, 8), st.integers(0, 10**6))
def test_exact_oracle_agrees_with_brute_force(n, seed):
    rng = np.random.default_rng(seed)
    g = Group(CYCLIC, n)
    k = [int(v) for v in rng.integers(0, n, 5)]
    for fam in (pt.constant_solution(g), pt.character_solution(g, *k)):
        for s in pt.finite_samples(g, rng, 3):
            lhs, rhs, _, _ = pt.pentagon_sides(fam, s)
            bl, br = brute(fam, s.x, s.y, s.u, s.v)
            assert abs(lhs - bl) <= 1e-12 and abs(rhs - br) <= 1e-12
            assert abs(lhs - rhs) <= 1e-12


def test_broken_family_fails():
    g = Group(CYCLIC, 3)
    tables = pt.tabulate(pt.constant_solution(g)).copy()
    tables[2, 1, 1] *= 2
    fam = pt._table_family(g, tables, "transformed", "broken")
    rep = pt.verify_pentagon(fam, [pt.SamplePoint(x, y, u, v) for x in range(3) for y in range(3)
                                   for u in range(3) for v in range(3)], 1e-12)
    assert not rep.passed


def test_symmetry_invert_finite():
    g = Group(CYCLIC, 5)
    c = pt.constant_solution(g)
    assert np.array_equal(pt.tabulate(pt.symmetry_invert(c)), pt.tabulate(c))
    fam = pt.character_solution(g, 1, 3, 2, 4, 1)
    twice = pt.symmetry_invert(pt.symmetry_invert(fam))
    assert np.array_equal(pt.tabulate(twice), pt.tabulate(fam))
    inv = pt.symmetry_invert(fam)
    assert pt.verify_pentagon(inv, pt.finite_samples(g, np.random.default_rng(2), 6), 1e-12).passed


def test_family_invariants():
    with pytest.raises(ValueError):
        pt.PentagonFamily(Group(CYCLIC, 2), (lambda x, y: 1,) * 4, "closed-form")
    with pytest.raises(ValueError):
        pt.PentagonFamily(Group(CYCLIC, 2), (lambda x, y: 1,) * 5, "made-up")


# reals: closed forms and constructions ---------------------------------------

def test_strip_constraints_render_and_invert():
    c = pt.StripConstraint(1.0, -1.0, 0.5)
    assert c.holds(0.2j, 0.0) and not c.holds(-0.6j, 0.0)
    assert c.inverted().holds(-0.2j, 0.0)
    assert "Im" in str(c)


def test_phi_plus_strip_is_derived(ctx, constructed_plus):
    cb = ctx.cb
    d = 0.05 / math.sqrt(0.5)
    assert constructed_plus.in_strip(0, 4j * d, -2j * d)
    assert not constructed_plus.in_strip(0, 0, 0)
    assert not constructed_plus.in_strip(0, 2.1j * cb, -0.01j)
    for x, y in [(4j * d, -2j * d), (0.3j, -0.1j), (1.9j * cb, -0.5j)]:
        closed = all(c.holds(x, y) for c in pt.phi_plus_strip(ctx))
        assert constructed_plus.in_strip(0, x, y) == closed


def test_degenerate_point_rejected(constructed_plus):
    with pytest.raises(OutsideStrip):
        constructed_plus(0, 0.0, 0.0)


def test_constructed_matches_phi_plus(ctx, D, constructed_plus):
    for x, y in pt.strip_grid(0.5)[::4]:
        assert constructed_plus(0, x, y) == pytest.approx(pt.phi_plus_closed(ctx, x, y, D),
                                                          rel=1e-6)


def test_cross_forms_agree(constructed_plus):
    rep = pt.cross_check_forms(constructed_plus, pt.strip_grid(0.5)[:3], 1e-6)
    assert rep.passed, rep.summary_line()


def test_reflected_pairing_gives_phi_minus(ctx, D, phi_t):
    fam = pt.construct_theorem2(phi_t, fd.make_reflected(phi_t))
    for x, y in [(0.3 + 0.1j, -0.2 - 0.05j), (-0.5, 0.4 + 0.1j)]:
        assert fam(0, x, y) == pytest.approx(pt.phi_minus(ctx, x, y, dilog=D), rel=1e-7)


def test_constant_pairing_gives_imp(ctx, D, phi_t):
    fam = pt.construct_theorem2(phi_t, fd.make_constant())
    for x, y in [(0.3 + 0.1j, -0.2 - 0.1j), (-0.6 - 0.2j, 0.5 - 0.3j)]:
        assert fam(0, x, y) == pytest.approx(pt.imp_closed(ctx, x, y, D), rel=1e-7)


def test_phi_plus_pole(ctx):
    with pytest.raises(PoleHit):
        pt.phi_plus_closed(ctx, 0.3 + 0.1j, 0.0)


def test_phi_plus_cyclic_substitution(ctx, D):
    # x -> -x-y, y -> x permutes {x, y, -x-y}; the closed form changes only
    # through which factor carries the -ic shift
    x, y = 0.3 + 0.2j, -0.4 - 0.1j
    X, Y = -x - y, x
    key = lambda z: (round(z.real, 12), round(z.imag, 12))
    assert sorted([x, y, -x - y], key=key) == sorted([X, Y, -X - Y], key=key)
    c = 1j * ctx.cb
    direct = D.psi(X - c) * D.psi(Y + c) * D.psi(-X - Y + c)
    assert pt.phi_plus_closed(ctx, X, Y, D) == pytest.approx(direct)


def test_phi_plus_pentagon(ctx):
    fam = pt.phi_plus_family(ctx)
    samples = pt.complexified_samples(np.random.default_rng(11), 3, 0.5)
    assert pt.verify_pentagon(fam, samples, 1e-5).passed


def test_inverted_phi_plus_at_mirrored_samples(ctx):
    fam = pt.symmetry_invert(pt.phi_plus_family(ctx))
    samples = [s.mirrored() for s in pt.complexified_samples(np.random.default_rng(4), 2, 0.5)]
    assert pt.verify_pentagon(fam, samples, 1e-5).passed


def test_imp_pentagon(ctx):
    fam = pt.imp_family(ctx)
    samples = pt.complexified_samples(np.random.default_rng(5), 3, 0.5)
    assert pt.verify_pentagon(fam, samples, 1e-8).passed


def test_phi_minus_real_and_regulated(ctx, D):
    x, y = 0.3, -0.2
    val, err = pt.phi_minus_extrapolated(ctx, x, y, dilog=D)
    assert abs(val.imag) < 1e-6
    assert err < 1e-6
    assert abs(val - pt.phi_minus(ctx, x, y, dilog=D)) < 1e-6


def test_phi_minus_eps_monotone(ctx, D):
    x, y = 0.3, -0.2
    ref = pt.phi_minus(ctx, x, y, dilog=D)
    errs = [abs(pt.phi_minus(ctx, x, y, eps=e, dilog=D) - ref) for e in (0.08, 0.04, 0.02)]
    assert errs[0] > errs[1] > errs[2]


def test_richardson():
    vals = [1 + 0.5 * 2.0 ** -k for k in range(4)]
    v, err = pt.richardson(vals)
    assert v == pytest.approx(1, abs=1e-14)


def test_euler_beta_fixtures():
    assert pt.euler_beta(1, 1) == pytest.approx(1)
    a, b = 1.3, 0.7
    assert pt.euler_beta(a, b) * gamma(a + b) / (gamma(a) * gamma(b)) == pytest.approx(1)
    with pytest.raises(ValueError):
        pt.beta_solution(0.0, 0.1, 0.2)


def test_beta_solution_pole():
    # a = 2 pi i (x+y) + 2 pi eps = 0 at x + y = i eps
    with pytest.raises(PoleHit):
        pt.beta_solution(0.1, 0.3 + 0.1j, -0.3)


def test_beta_trend_decreases():
    s = pt.SamplePoint(*np.random.default_rng(20249).uniform(-1, 1, 4))
    res = [pt.verify_pentagon(pt.beta_family(e), [s], math.inf).max_rel_err
           for e in (0.1, 0.05, 0.025)]
    assert res[0] > res[1] > res[2]


def test_outside_strip_recorded_not_raised(ctx, phi_t, constructed_plus):
    rep = pt.verify_pentagon(constructed_plus, [pt.SamplePoint(0.1, 0.2, 0.3, 0.4)], 1e-5)
    assert not rep.passed and rep.errors and "OutsideStrip" in rep.errors[0]


def test_sample_helpers():
    s = pt.SamplePoint(1, 2, 3, 4, 0.5)
    assert s.mirrored().mirrored() == s
    (a4, b4), (a2, b2), (a0, b0) = s.rhs_args(1)
    assert (a4, b4, a2, b2, a0, b0) == (5, 3, 9, 1, 5, 1)
    ss = pt.complexified_samples(np.random.default_rng(0), 4, 0.5)
    d = 0.05 / math.sqrt(0.5)
    for p in ss:
        assert p.x.imag == pytest.approx(4 * d) and p.y.imag == pytest.approx(-2 * d)
        assert (p.x + p.y).imag > 0
