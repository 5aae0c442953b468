"""The acceptance battery: ten property checks with pinned seeds and tolerances.

Each ``criterion_N`` returns a :class:`CriterionResult`; the CLI ``selftest``
and the acceptance tests both run these.
"""

from __future__ import annotations

import inspect
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import faddeev as fd
from . import pentagon as pt
from .automorphic import (lift_theorem1, make_data, quotient_samples, verify_eq11,
                          verify_quasiperiodicity)
from .errors import DistributionalInput
from .lca import CYCLIC, Group, fourier_family
from .qdilog import (Dilog, inversion_constant, inversion_constant_reference, make_context,
                     phi_eval, phi_integral, phi_product, phi_zero)
from .quad import Contour, integrate_contour, integrate_line
from .report import PointRecord, VerificationReport
from .simplicial import random_labeling, verify_23move

SEED = 20240


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    gating: bool = True
    reports: list[VerificationReport] = field(default_factory=list)
    wall_time: float = 0.0

    def line(self) -> str:
        tag = ("PASS" if self.passed else "FAIL") if self.gating else "INFO"
        return f"[{tag}] criterion {self.number}: {self.title} -- {self.detail}"


def _report(name, tol, pairs, params=None):
    rep = VerificationReport(name, params or {}, tol)
    for inputs, lhs, rhs in pairs:
        rep.points.append(PointRecord.compare(inputs, lhs, rhs))
    return rep


def _rng(k: int) -> np.random.Generator:
    return np.random.default_rng(SEED + k)


# ---------------------------------------------------------------------------

def criterion_1(tol: float = 1e-8) -> CriterionResult:
    reps = []
    for hbar in (0.3, 0.5, 1.0):
        ctx = make_context(hbar)
        xs = [complex(a, b * ctx.cb) for a in np.linspace(-2, 2, 5)
              for b in np.linspace(-0.8, 0.8, 5)]
        prod = phi_product(ctx, np.array(xs))
        integ = phi_integral(ctx, np.array(xs))
        reps.append(_report(f"qdilog-representations(hbar={hbar})", tol,
                            [({"x": x}, i, p) for x, i, p in zip(xs, integ, prod)],
                            {"hbar": hbar}))
    worst = max(r.max_rel_err for r in reps)
    return CriterionResult(1, "integral vs product representation", all(r.passed for r in reps),
                           f"max rel err {worst:.2e} (tol {tol:.0e})", reports=reps)


def functional_equation_report(hbar: float, n: int, rng: np.random.Generator,
                               tol: float) -> VerificationReport:
    """Difference equations in i b^{+-1} and the inversion relation at seeded points."""
    ctx = make_context(hbar)
    rep = VerificationReport(f"qdilog-functional(hbar={hbar})", {"hbar": hbar}, tol)
    phi0sq = inversion_constant(hbar)
    for _ in range(n):
        x = complex(*rng.uniform(-1.5, 1.5, 2) * (1, 0.5 * ctx.cb))
        for s in (1, -1):
            bs = ctx.b ** s
            lhs = phi_eval(ctx, x - 0.5j * bs)
            rhs = (1 + np.exp(2 * np.pi * bs * x)) * phi_eval(ctx, x + 0.5j * bs)
            rep.points.append(PointRecord.compare({"x": x, "law": f"shift b^{s}"}, lhs, rhs))
        lhs = phi_eval(ctx, x) * phi_eval(ctx, -x)
        rhs = np.exp(1j * np.pi * x * x) * phi0sq
        rep.points.append(PointRecord.compare({"x": x, "law": "inversion"}, lhs, rhs))
    return rep


def criterion_2(tol: float = 1e-8) -> CriterionResult:
    """Gating part: difference equations and the inversion relation with
    Phi(0)^2 = exp(i pi (1/hbar - 2)/12).  The reference closed form
    exp(-i pi (2 + 1/hbar)/12) is reported separately (it cannot match)."""
    reps = [functional_equation_report(h, 10, _rng(2), tol) for h in (0.3, 0.5, 1.0)]
    ref = VerificationReport("qdilog-phi0-reference", {}, tol)
    for h in (0.3, 0.5, 1.0):
        ctx = make_context(h)
        ref.points.append(PointRecord.compare({"hbar": h}, phi_zero(ctx) ** 2,
                                              inversion_constant_reference(h)))
    reps.append(ref)
    ok = all(r.passed for r in reps[:-1])
    return CriterionResult(
        2, "functional equations and inversion relation", ok,
        f"max rel err {max(r.max_rel_err for r in reps[:-1]):.2e}; "
        f"Phi(0)^2 vs exp(-i pi (2+1/hbar)/12): {ref.max_rel_err:.2e} "
        f"({'matches' if ref.passed else 'does not match'})", reports=reps)


def criterion_3(tol: float = 1e-6) -> CriterionResult:
    ctx = make_context(0.5)
    t = fd.make_phi(ctx)
    samples = fd.sample_pairs(_rng(3), 10)
    reps = [fd.verify_eq50(t, samples, tol), fd.verify_eq50(fd.make_reflected(t), samples, tol)]
    try:
        fd.verify_eq50(fd.make_constant(), samples[:1], tol)
        rejected = False
    except DistributionalInput:
        rejected = True
    ok = all(r.passed for r in reps) and rejected
    return CriterionResult(3, "Fourier-side five-term identity for Phi tuples", ok,
                           f"max rel err {max(r.max_rel_err for r in reps):.2e}; constant tuple "
                           f"{'rejected' if rejected else 'NOT rejected'}", reports=reps)


def criterion_4(tol: float = 1e-6) -> CriterionResult:
    ctx = make_context(0.5)
    D = Dilog(ctx)
    t = fd.make_phi(ctx, D)
    fam = pt.construct_theorem2(t, t)
    pts = pt.strip_grid(0.5)
    cross = pt.cross_check_forms(fam, pts, tol)
    closed = _report("phi-plus-integral-vs-closed", tol,
                     [({"x": x, "y": y}, fam(0, x, y), pt.phi_plus_closed(ctx, x, y, D))
                      for x, y in pts])
    reps = [cross, closed]
    return CriterionResult(4, "integral construction: cross-form and phi-plus closed form",
                           all(r.passed for r in reps),
                           f"two integral forms {cross.max_rel_err:.2e}, closed form "
                           f"{closed.max_rel_err:.2e}", reports=reps)


def criterion_5(tol: float = 1e-5) -> CriterionResult:
    ctx = make_context(0.5)
    fam = pt.phi_plus_family(ctx)
    rep = pt.verify_pentagon(fam, pt.complexified_samples(_rng(5), 10, 0.5), tol)
    return CriterionResult(5, "pentagon relation for phi-plus", rep.passed,
                           f"max rel err {rep.max_rel_err:.2e}", reports=[rep])


def brute_force_sides(fam: pt.PentagonFamily, x: int, y: int, u: int, v: int):
    """Triple-loop oracle over a cyclic group using scalar calls only."""
    n, w = fam.group.n, fam.group.measure_scale
    f = lambda j, a, b: complex(fam.functions[j](np.int64(a % n), np.int64(b % n)))
    lhs = f(1, x, y) * f(3, u, v)
    rhs = 0j
    for z in range(n):
        rhs += f(4, u + y, v - z) * f(2, x + y + u + v - z, z) * f(0, x + v, y - z) * w
    return lhs, rhs


def finite_battery(n: int, tol: float, rng: np.random.Generator) -> list[VerificationReport]:
    g = Group(CYCLIC, n)
    base = pt.constant_solution(g)
    fams = [base, fourier_family(base), pt.symmetry_invert(base)]
    reps = []
    for fam in fams:
        samples = pt.finite_samples(fam.group, rng, 6)
        rep = pt.verify_pentagon(fam, samples, tol)
        # the oracle must reproduce both sides independently
        oracle = VerificationReport(f"brute-force({fam.name})", {}, tol)
        for s, p in zip(samples, rep.points):
            lhs, rhs = brute_force_sides(fam, s.x, s.y, s.u, s.v)
            oracle.points.append(PointRecord.compare(s.as_dict(), p.lhs, lhs))
            oracle.points.append(PointRecord.compare(s.as_dict(), p.rhs, rhs))
        move = VerificationReport(f"23move({fam.name})", {}, tol)
        for _ in range(4):
            move.extend(verify_23move(fam, random_labeling(rng, fam), tol))
        reps += [rep, oracle, move]
    return reps


def criterion_6(tol: float = 1e-12) -> CriterionResult:
    rng = _rng(6)
    reps = [r for n in (1, 4, 7) for r in finite_battery(n, tol, rng)]
    worst = max(r.max_rel_err for r in reps)
    return CriterionResult(6, "exact finite-group battery", all(r.passed for r in reps),
                           f"{len(reps)} checks, max rel err {worst:.2e}", reports=reps)


def criterion_7(tol_closed: float = 1e-8, tol_quasi: float = 1e-8, tol_quotient: float = 1e-4,
                tol_period: float = 1e-8) -> CriterionResult:
    ctx = make_context(0.5)
    D = Dilog(ctx)
    t = fd.make_phi(ctx, D)
    rng = _rng(7)
    d = 0.5 * ctx.cb
    pairs = []
    for _ in range(5):
        x = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
        y = complex(rng.uniform(-1, 1), -rng.uniform(0.1, 0.9) * d)
        # (F Phi)(y) by direct quadrature along R + i d
        fphi = fd.tilde_by_quadrature(t, 0, -y, offset=d)
        pairs.append(({"x": x, "y": y}, np.exp(-1j * np.pi * x * y) * fphi,
                      pt.imp_closed(ctx, x, y, D)))
    closed = _report("imp-closed-vs-quadrature", tol_closed, pairs)
    fam = pt.imp_family(ctx, D)
    q = lift_theorem1(fam, make_data())
    cb = ctx.cb
    qp = [(complex(a, 0.3 * cb), complex(b, -0.1 * cb)) for a, b in rng.uniform(-0.5, 0.5, (3, 2))]
    quasi = verify_quasiperiodicity(q, qp, tol_quasi)
    samples = quotient_samples(rng, 5, 0.5)
    quot = verify_eq11(q, samples, tol_quotient, periodicity_tol=tol_period)
    period = max(p.inputs.get("periodicity_defect", math.inf) for p in quot.points)
    reps = [closed, quasi, quot]
    ok = all(r.passed for r in reps) and period <= tol_period
    return CriterionResult(7, "quasi-periodic example", ok,
                           f"closed form {closed.max_rel_err:.2e}, quasi-periodicity "
                           f"{quasi.max_rel_err:.2e}, quotient pentagon {quot.max_rel_err:.2e}, "
                           f"z-periodicity {period:.2e}", reports=reps)


def fourier_relation_point(ctx, x: float, y: float, tol: float = 1e-6):
    """(2 phi-minus(-2x, -2y), double Fourier transform of phi-plus at (x, y))."""
    D = Dilog(ctx)
    lhs = 2 * pt.phi_minus(ctx, -2 * x, -2 * y, dilog=D)
    fam = pt.phi_plus_family(ctx, D)
    al, be = 0.8 * ctx.cb, 0.4 * ctx.cb
    rate = 0.9 * math.pi * min(be, al - be)
    ff = fourier_family(fam, tol=tol, offsets=(al, -be), decay=(rate, rate))
    return lhs, ff(0, x, y)


def criterion_8(tol_real: float = 1e-6, tol_fourier: float = 1e-4) -> CriterionResult:
    ctx = make_context(0.5)
    D = Dilog(ctx)
    rng = _rng(8)
    real = VerificationReport("phi-minus-reality", {"hbar": 0.5}, tol_real)
    for _ in range(5):
        x, y = rng.uniform(-1, 1, 2)
        val, err = pt.phi_minus_extrapolated(ctx, x, y, dilog=D)
        rec = PointRecord({"x": float(x), "y": float(y)}, val, val.real + 0j, abs(val.imag),
                          abs(val.imag), err)
        real.points.append(rec)
    real_ok = all(p.abs_err <= tol_real for p in real.points)
    lhs, rhs = fourier_relation_point(ctx, 0.15, -0.1)
    four = _report("phi-minus-fourier-relation", tol_fourier,
                   [({"x": 0.15, "y": -0.1}, lhs, rhs)])
    four_ok = abs(lhs - rhs) <= tol_fourier
    worst_im = max(p.abs_err for p in real.points)
    return CriterionResult(8, "phi-minus reality and Fourier relation", real_ok and four_ok,
                           f"max |Im| {worst_im:.2e}, Fourier relation |diff| "
                           f"{abs(lhs - rhs):.2e}", reports=[real, four])


def beta_trend(eps_values=(0.1, 0.05, 0.025)) -> list[float]:
    x, y, u, v = _rng(9).uniform(-1, 1, 4)
    s = pt.SamplePoint(x, y, u, v)
    out = []
    for eps in eps_values:
        rep = pt.verify_pentagon(pt.beta_family(eps), [s], math.inf)
        out.append(rep.max_rel_err)
    return out


def criterion_9() -> CriterionResult:
    res = beta_trend()
    dec = all(b < a for a, b in zip(res[:-1], res[1:]))
    return CriterionResult(9, "Euler-beta residual trend (best effort)", dec,
                           "residuals " + ", ".join(f"{r:.3f}" for r in res)
                           + (" strictly decreasing" if dec else " not monotone"),
                           gating=False)


def quad_fixtures() -> dict[str, tuple[Callable[[float], object], complex]]:
    """name -> (integrate at tol, exact value)."""
    def gauss(tol):
        return integrate_line(lambda x: np.exp(-np.pi * x * x), tol=tol, decay=1.0)

    def fres(tol):
        # int_0^inf e^{i t^2} dt along the ray of steepest descent
        c = Contour((0j,), None, np.exp(0.25j * np.pi), None, 1.0)
        return integrate_contour(lambda z: np.exp(1j * z * z), c, tol=tol)

    def shift(tol):
        # Gaussian along R + i/2: contour shift leaves the value unchanged
        return integrate_contour(lambda z: np.exp(-np.pi * z * z),
                                 Contour.horizontal(0.5, 1.0), tol=tol)

    fresnel = 0.5 * math.sqrt(math.pi) * np.exp(0.25j * np.pi)
    return {"gaussian": (gauss, 1.0), "fresnel": (fres, fresnel), "contour-shift": (shift, 1.0)}


def criterion_10() -> CriterionResult:
    rep = VerificationReport("quad-fixtures", {}, 0.0)
    ok = True
    notes = []
    for name, (fn, exact) in quad_fixtures().items():
        errs = []
        for tol in (1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
            r = fn(tol)
            err = abs(r.value - exact)
            errs.append(err)
            within = err <= max(r.err_estimate, 1e-15) and err <= tol
            ok &= within
            rep.points.append(PointRecord({"fixture": name, "tol": tol}, r.value, exact, err,
                                          err / abs(exact), r.err_estimate,
                                          None if within else "error exceeds estimate"))
        # refinement monotonicity, up to roundoff
        mono = all(b <= max(a, 1e-15) for a, b in zip(errs[:-1], errs[1:]))
        ok &= mono
        notes.append(f"{name} {errs[-1]:.1e}{'' if mono else ' (non-monotone)'}")
    return CriterionResult(10, "quadrature fixtures", ok, ", ".join(notes), reports=[rep])


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def run(numbers=None, tol: float | None = None) -> list[CriterionResult]:
    """Run the given criteria (all by default).  ``tol`` overrides every
    tolerance argument of every criterion."""
    out = []
    for k in numbers or sorted(CRITERIA):
        fn = CRITERIA[k]
        kw = {}
        if tol is not None:
            kw = {n: tol for n in inspect.signature(fn).parameters if n.startswith("tol")}
        t0 = time.perf_counter()
        res = fn(**kw)
        res.wall_time = time.perf_counter() - t0
        out.append(res)
    return out
