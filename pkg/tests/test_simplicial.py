import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betapenta import pentagon as pt
from betapenta import simplicial as sx
from betapenta.lca import CYCLIC, Group, fourier_family
from betapenta.qdilog import make_context


def labeling(values):
    return sx.EdgeLabeling.from_values(values)


def test_face_maps():
    assert [sx.face_map(4, j) for j in range(4)] == [0, 1, 2, 3]
    assert [sx.face_map(0, j) for j in range(4)] == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        sx.face_map(5, 0)


def test_pullbacks():
    x = labeling(range(10))
    assert sx.pullback(4, x).labels == {e: x[e] for e in sx.EDGES3}
    p0 = sx.pullback(0, x)
    assert all(p0[j, k] == x[j + 1, k + 1] for j, k in sx.EDGES3)
    assert sx.pullback(2, x)[1, 2] == x[1, 3]


def test_labeling_invariants():
    with pytest.raises(ValueError):
        sx.EdgeLabeling({(0, 1): 1})
    x = labeling(range(10))
    assert x[3, 1] == x[1, 3]
    assert x.with_edge((1, 3), 99)[1, 3] == 99


def test_identity_labels_collapse():
    g = Group(CYCLIC, 5)
    fam = pt.character_solution(g, 1, 2, 3, 4, 1)
    y = sx.EdgeLabeling({e: 0 for e in sx.EDGES3})
    for i in range(5):
        assert sx.weight_W(fam, i, y) == fam(i, 0, 0)


def test_constant_weights():
    fam = pt.constant_solution(Group(CYCLIC, 6))
    y = sx.EdgeLabeling.from_values([1, 5, 2, 3, 0, 4])
    assert all(sx.weight_W(fam, i, y) == pytest.approx(1 / 6) for i in range(5))


def test_weight_matches_hand_composition():
    g = Group(CYCLIC, 5)
    fam = pt.character_solution(g, 2, 1, 4, 3, 0)
    rng = np.random.default_rng(9)
    x = sx.random_labeling(rng, fam)
    for i in range(5):
        e = lambda j, k: x[sx.face_map(i, j), sx.face_map(i, k)]
        a = e(0, 1) + e(2, 3) - e(0, 3) - e(1, 2)
        b = e(0, 3) + e(1, 2) - e(0, 2) - e(1, 3)
        assert sx.weight_W(fam, i, sx.pullback(i, x)) == fam(i, a % 5, b % 5)


def test_face_bookkeeping():
    assert sx.faces_with_edge() == (0, 2, 4)
    for i in range(5):
        depends = sx._x13_coefficients(i) != (0, 0)
        assert depends == (i in sx.RHS_FACES)


def test_constant_move_exact():
    fam = pt.constant_solution(Group(CYCLIC, 4))
    lhs, rhs, _, _ = sx.move_sides(fam, labeling([1, 2, 3, 0, 2, 1, 3, 0, 1, 2]))
    assert lhs == pytest.approx(1 / 16, abs=1e-15) and rhs == pytest.approx(1 / 16, abs=1e-15)


def test_fourier_constant_move_brute_force():
    fam = fourier_family(pt.constant_solution(Group(CYCLIC, 6)))
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = sx.random_labeling(rng, fam)
        rep = sx.verify_23move(fam, x, 1e-12)
        assert rep.passed
        rhs = sum(np.prod([sx.weight_W(fam, i, sx.pullback(i, x.with_edge((1, 3), t)))
                           for i in sx.RHS_FACES]) * fam.group.measure_scale for t in range(6))
        assert rep.points[0].rhs == pytest.approx(rhs, abs=1e-12)


@given(st.integers(1, 8), st.integers(0, 10**6))
def test_reduction_property(n, seed):
    rng = np.random.default_rng(seed)
    g = Group(CYCLIC, n)
    k = [int(v) for v in rng.integers(0, n, 5)]
    for fam in (pt.constant_solution(g), pt.character_solution(g, *k)):
        x = sx.random_labeling(rng, fam)
        assert sx.reduction_defect(fam, x) <= 1e-12
        assert sx.verify_23move(fam, x, 1e-12).passed


def test_induced_sample_consistency():
    x = labeling(np.arange(10) * 1.0)
    s, z = sx.induced_sample(x)
    # face 1 and face 3 arguments are exactly (x, y) and (u, v)
    assert sx.face_arguments(sx.pullback(1, x)) == (s.x, s.y)
    assert sx.face_arguments(sx.pullback(3, x)) == (s.u, s.v)


def test_phi_plus_move_over_reals():
    ctx = make_context(0.5)
    fam = pt.phi_plus_family(ctx)
    x = sx.random_labeling(np.random.default_rng(2), fam, hbar=0.5)
    rep = sx.verify_23move(fam, x, 1e-5)
    assert rep.passed, rep.summary_line()
    assert sx.reduction_defect(fam, x) <= 1e-9


def test_complexified_labels_give_recipe():
    d = 0.1
    x = sx.complexify_labels(labeling(np.zeros(10)), d)
    s, z = sx.induced_sample(x)
    assert s.x.imag == pytest.approx(4 * d) and s.u.imag == pytest.approx(4 * d)
    assert s.y.imag == pytest.approx(-2 * d) and s.v.imag == pytest.approx(-2 * d)
    assert z.imag == pytest.approx(-d)


def test_reals_need_decay():
    fam = pt.beta_family(0.1)
    x = sx.random_labeling(np.random.default_rng(0), fam)
    rep = sx.verify_23move(fam, x, 1e-5)
    assert not rep.passed and rep.errors
