"""Families of the beta pentagon type and the five-term verifier.

A family is a group ``A`` together with five functions ``phi_j : A^2 -> C``
satisfying

    phi_1(x, y) phi_3(u, v) = int_A phi_4(u+y, v-z) phi_2(x+y+u+v-z, z) phi_0(x+v, y-z) dz

(written additively).  Over the reals the defining integrals usually converge
only for complexified arguments, so families carry strip metadata: linear
bounds on ``Im x`` and ``Im y``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from itertools import product as _iproduct
from typing import Callable, Sequence

import numpy as np
from scipy.special import loggamma

from .errors import (BetaPentaError, DistributionalInput, NonConvergent, OutsideStrip,
                     PoleHit)
from .faddeev import Asymptotics, FaddeevTuple, decay_rates
from .lca import CIRCLE, CYCLIC, INTEGERS, REALS, Group, haar_integrate
from .qdilog import Dilog, HbarContext
from .quad import Contour, integrate_contour, integrate_line
from .report import PointRecord, VerificationReport

Func2 = Callable[[np.ndarray, np.ndarray], np.ndarray]

REAL_LINE = Group(REALS)

# integrals whose tails decay slower than this are refused
MIN_RATE = 0.05


@dataclass(frozen=True)
class StripConstraint:
    """Open half-plane  ax * Im x + ay * Im y + d > 0."""

    ax: float
    ay: float
    d: float

    def value(self, x, y):
        return self.ax * np.imag(x) + self.ay * np.imag(y) + self.d

    def holds(self, x, y) -> bool:
        return bool(np.all(self.value(x, y) > 0))

    def inverted(self) -> "StripConstraint":
        return StripConstraint(-self.ax, -self.ay, self.d)

    def __str__(self):
        return f"{self.ax:+.4g} Im x {self.ay:+.4g} Im y {self.d:+.4g} > 0"


@dataclass(frozen=True)
class PentagonFamily:
    """Five functions on ``group``^2 plus the metadata needed to evaluate them.

    ``functions[j](x, y)`` broadcasts over array arguments.  ``strips[j]``
    lists the constraints an evaluation point of ``phi_j`` must satisfy;
    closed-form families leave it empty and describe their poles instead.
    ``rhs_decay`` is the exponential decay rate of the five-term z-integrand
    along horizontal lines, when known.  ``alt_functions`` is an independent
    evaluator used for cross-checks.
    """

    group: Group
    functions: tuple[Func2, ...]
    provenance: str
    name: str = "family"
    strips: tuple[tuple[StripConstraint, ...], ...] = ((),) * 5
    poles: tuple[str, ...] = ()
    rhs_decay: float | None = None
    alt_functions: tuple[Func2, ...] | None = None
    tables: np.ndarray | None = field(default=None, compare=False, repr=False)
    distributional: bool = False

    def __post_init__(self):
        if len(self.functions) != 5 or len(self.strips) != 5:
            raise ValueError("a pentagon family has exactly five components")
        if self.provenance not in ("constructed", "closed-form", "transformed"):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def in_strip(self, j: int, x, y) -> bool:
        return all(c.holds(x, y) for c in self.strips[j])

    def check(self, j: int, x, y) -> None:
        for c in self.strips[j]:
            if not c.holds(x, y):
                raise OutsideStrip(f"phi_{j} needs {c}")

    def __call__(self, j: int, x, y):
        if self.group.kind == REALS:
            self.check(j, x, y)
        else:
            x, y = self.group.reduce(x), self.group.reduce(y)
        return self.functions[j](x, y)


def _table_family(g: Group, tables: np.ndarray, provenance: str, name: str) -> PentagonFamily:
    """Family over a cyclic group given by its value tables ``[j, x, y]``."""
    tables = np.asarray(tables, dtype=complex)
    tables.setflags(write=False)
    n = g.n

    def make(j):
        def phi(x, y):
            xi = np.mod(np.asarray(x, dtype=int), n)
            yi = np.mod(np.asarray(y, dtype=int), n)
            return tables[j][xi, yi]
        return phi

    return PentagonFamily(g, tuple(make(j) for j in range(5)), provenance, name,
                          tables=tables)


def tabulate(fam: PentagonFamily) -> np.ndarray:
    """Values ``[j, x, y]`` of a family over a cyclic group."""
    if fam.group.kind != CYCLIC:
        raise ValueError("only families over cyclic groups can be tabulated")
    if fam.tables is not None:
        return fam.tables
    e = fam.group.elements()
    X, Y = np.meshgrid(e, e, indexing="ij")
    return np.array([np.broadcast_to(fam.functions[j](X, Y), X.shape) for j in range(5)],
                    dtype=complex)


# ---------------------------------------------------------------------------
# finite fixtures

def constant_solution(g: Group) -> PentagonFamily:
    """phi_j = 1 / (N w), the value forced by the identity for weight w per point."""
    if g.kind != CYCLIC:
        raise ValueError("constant solution is defined over cyclic groups")
    c = 1.0 / (g.n * g.measure_scale)
    return _table_family(g, np.full((5, g.n, g.n), c, dtype=complex), "closed-form",
                         f"const(zn:{g.n})")


def character_solution(g: Group, k0: int = 0, k2: int = 0, k4: int = 0, l0: int = 0,
                       l4: int = 0) -> PentagonFamily:
    """Exact exponential solutions phi_j = c e^{2 pi i (k_j x + l_j y) / N}.

    Five integers are free; the remaining exponents are forced by matching
    both sides of the identity (l_2 = l_4 + k_2 + l_0 etc.).
    """
    if g.kind != CYCLIC:
        raise ValueError("character solutions are defined over cyclic groups")
    n = g.n
    k1, k3 = k2 + k0, k4 + k2
    l2, l1, l3 = l4 + k2 + l0, k4 + k2 + l0, l4 + k2 + k0
    ks, ls = (k0, k1, k2, k3, k4), (l0, l1, l2, l3, l4)
    e = np.arange(n)
    c = 1.0 / (n * g.measure_scale)
    tables = np.array([c * np.exp(2j * np.pi * np.mod(np.add.outer(k * e, l * e), n) / n)
                       for k, l in zip(ks, ls)])
    return _table_family(g, tables, "closed-form",
                         f"char(zn:{n};k={k0},{k2},{k4};l={l0},{l4})")


def symmetry_invert(fam: PentagonFamily) -> PentagonFamily:
    """phi'_j(x, y) = phi_j(-x, -y)."""
    g = fam.group
    if fam.tables is not None:
        idx = np.mod(-np.arange(g.n), g.n)
        return _table_family(g, fam.tables[:, idx][:, :, idx], "transformed",
                             f"inv({fam.name})")
    funcs = tuple((lambda x, y, f=f: f(g.neg(np.asarray(x)), g.neg(np.asarray(y))))
                  for f in fam.functions)
    alt = None
    if fam.alt_functions is not None:
        alt = tuple((lambda x, y, f=f: f(-np.asarray(x), -np.asarray(y)))
                    for f in fam.alt_functions)
    strips = tuple(tuple(c.inverted() for c in cs) for cs in fam.strips)
    return replace(fam, functions=funcs, alt_functions=alt, strips=strips,
                   provenance="transformed", name=f"inv({fam.name})")


# ---------------------------------------------------------------------------
# Integral construction from a pair of Faddeev tuples

@dataclass(frozen=True)
class _Term:
    """Factor g(sign * t + cx * x + cy * y) of a t-integrand."""

    func: Callable
    asym: Asymptotics
    sign: int
    cx: float
    cy: float
    band: tuple[float, float]


@dataclass(frozen=True)
class _IntegralForm:
    """int e^{2 pi i (kx x + ky y) t} prod(terms) dt with contour-height search."""

    kx: float
    ky: float
    terms: tuple[_Term, ...]

    def rates(self, X: float, Y: float, h: float) -> tuple[float, float]:
        factors = [(t.asym, t.sign, 1j * (t.cx * X + t.cy * Y)) for t in self.terms]
        left, right = decay_rates(factors, h)
        w = self.kx * X + self.ky * Y          # Im of the kernel frequency
        return left - 2 * math.pi * w, right + 2 * math.pi * w

    def band_constraints(self):
        """Linear constraints (aX, aY, ah, d) from the analyticity bands."""
        out = []
        for t in self.terms:
            lo, hi = t.band
            if math.isfinite(lo):
                out.append((t.cx, t.cy, float(t.sign), -lo))
            if math.isfinite(hi):
                out.append((-t.cx, -t.cy, -float(t.sign), hi))
        return out

    def rate_constraints(self):
        base = np.array(self.rates(0.0, 0.0, 0.0))
        dX = np.array(self.rates(1.0, 0.0, 0.0)) - base
        dY = np.array(self.rates(0.0, 1.0, 0.0)) - base
        dh = np.array(self.rates(0.0, 0.0, 1.0)) - base
        return [(dX[k], dY[k], dh[k], base[k]) for k in range(2)]

    def strip(self) -> tuple[StripConstraint, ...]:
        cons = self.band_constraints() + self.rate_constraints()
        return _eliminate_h(cons)

    def height(self, X: float, Y: float) -> tuple[float, tuple[float, float]]:
        """Contour height maximising the smaller tail rate inside the bands."""
        lo, hi = -math.inf, math.inf
        for ax, ay, ah, d in self.band_constraints():
            bound = -(ax * X + ay * Y + d) / ah
            if ah > 0:
                lo = max(lo, bound)
            else:
                hi = min(hi, bound)
        if not lo < hi:
            raise OutsideStrip("no contour height avoids the singularities")
        if math.isinf(lo) and math.isinf(hi):
            lo, hi = -1.0, 1.0
        elif math.isinf(lo):
            lo = hi - 2.0
        elif math.isinf(hi):
            hi = lo + 2.0
        w = hi - lo
        grid = np.linspace(lo + 0.15 * w, hi - 0.15 * w, 71)
        mid = 0.5 * (lo + hi)
        best = max(grid, key=lambda h: (round(min(self.rates(X, Y, h)), 9), -abs(h - mid)))
        r = self.rates(X, Y, best)
        if not min(r) > 0:
            raise OutsideStrip(f"integrand does not decay at Im x={X:.4g}, Im y={Y:.4g}")
        if min(r) < MIN_RATE:
            raise NonConvergent(f"tail decay rate {min(r):.3g} too slow near the strip edge")
        return float(best), r

    def evaluate(self, x: complex, y: complex, tol: float) -> complex:
        """Integral value; ``tol`` is relative to the integrand's peak modulus."""
        h, (left, right) = self.height(x.imag, y.imag)
        k = self.kx * x + self.ky * y
        terms = self.terms

        def integrand(t):
            out = np.exp(2j * np.pi * k * t)
            for tm in terms:
                out = out * tm.func(tm.sign * t + tm.cx * x + tm.cy * y)
            return out

        centre = -np.mean([tm.sign * (tm.cx * x + tm.cy * y).real for tm in terms])
        probe = integrand(centre + np.linspace(-6, 6, 97) + 1j * h)
        peak = float(np.max(np.abs(probe)))
        c = Contour.horizontal(h, (0.9 * left, 0.9 * right))
        return integrate_contour(integrand, c, tol=tol * max(peak, 1e-300)).value


def _eliminate_h(cons) -> tuple[StripConstraint, ...]:
    """Fourier-Motzkin elimination of the contour height."""
    pos = [c for c in cons if c[2] > 1e-14]
    neg = [c for c in cons if c[2] < -1e-14]
    out = [(ax, ay, d) for ax, ay, ah, d in cons if abs(ah) <= 1e-14]
    for p in pos:
        for n in neg:
            a, b = 1 / p[2], 1 / -n[2]
            out.append((p[0] * a + n[0] * b, p[1] * a + n[1] * b, p[3] * a + n[3] * b))
    strips = []
    for ax, ay, d in out:
        if abs(ax) < 1e-14 and abs(ay) < 1e-14:
            if d <= 0:
                raise NonConvergent("the defining integral converges nowhere")
            continue
        sc = StripConstraint(round(ax, 12) + 0.0, round(ay, 12) + 0.0, round(d, 12) + 0.0)
        if sc not in strips:
            strips.append(sc)
    return tuple(strips)


def _pointwise(fn: Callable[[complex, complex], complex]) -> Func2:
    def phi(x, y):
        xs, ys = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
        out = np.array([fn(complex(a), complex(b)) for a, b in zip(xs.ravel(), ys.ravel())],
                       dtype=complex).reshape(xs.shape)
        return out if out.ndim else complex(out)
    return phi


def kernel_form(f: FaddeevTuple, g: FaddeevTuple, j: int) -> _IntegralForm:
    """int e^{2 pi i y t} f_j(t + x/2) gbar_j(t - x/2) dt."""
    return _IntegralForm(0.0, 1.0, (
        _Term(f.f[j], f.asym[j], 1, 0.5, 0.0, f.band),
        _Term(g.fbar[j], g.asym[j].conjugate(), 1, -0.5, 0.0, g.bar_band)))


def convolution_form(f: FaddeevTuple, g: FaddeevTuple, j: int) -> _IntegralForm:
    """int e^{2 pi i x t} ft_j(t - y/2) conj(gt_j)(t + y/2) dt."""
    return _IntegralForm(1.0, 0.0, (
        _Term(f.ftilde[j], f.asym_tilde[j], 1, 0.0, -0.5, f.tilde_band),
        _Term(g.ftilde_bar[j], g.asym_tilde[j].conjugate(), 1, 0.0, 0.5, g.tilde_bar_band)))


def construct_theorem2(f: FaddeevTuple, g: FaddeevTuple, tol: float = 1e-11,
                       name: str | None = None) -> PentagonFamily:
    """phi_j(x, y) = int e^{2 pi i y t} f_j(t + x/2) gbar_j(t - x/2) dt over R.

    The integral is evaluated along the horizontal line that maximises the
    tail decay within the analyticity bands of the factors, which equals the
    (Abel-regularised) real-line integral.  The strips are obtained by
    eliminating the contour height from the band and decay constraints.  When
    both tuples have function-valued transforms, the dual form is attached as
    ``alt_functions``.
    """
    forms = [kernel_form(f, g, j) for j in range(5)]
    strips = tuple(fm.strip() for fm in forms)
    funcs = tuple(_pointwise(lambda x, y, fm=fm: fm.evaluate(x, y, tol)) for fm in forms)
    alt = None
    if f.has_tilde and g.has_tilde:
        alt_forms = [convolution_form(f, g, j) for j in range(5)]
        alt = tuple(_pointwise(lambda x, y, fm=fm: fm.evaluate(x, y, tol)) for fm in alt_forms)
    rhs = None
    if f.ctx is not None and f.name == g.name == "phi":
        rhs = 2 * math.pi / f.ctx.sqrt_hbar
    return PentagonFamily(REAL_LINE, funcs, "constructed", name or f"thm2({f.name},{g.name})",
                          strips=strips, rhs_decay=rhs, alt_functions=alt)


# ---------------------------------------------------------------------------
# closed forms over the reals

def phi_plus_closed(ctx: HbarContext, x, y, dilog: Dilog | None = None):
    """Psi(x - i c) Psi(y + i c) Psi(-x - y + i c) with c = 1 / (2 sqrt(hbar))."""
    D = dilog or Dilog(ctx)
    c = 1j * ctx.cb
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    out = D.psi(x - c) * D.psi(y + c) * D.psi(-x - y + c)
    return out if np.ndim(out) else complex(out)


def phi_plus_strip(ctx: HbarContext) -> tuple[StripConstraint, ...]:
    """Region where the defining integral of phi-plus converges."""
    return (StripConstraint(1.0, 0.0, 0.0), StripConstraint(0.0, -1.0, 0.0),
            StripConstraint(1.0, 1.0, 0.0), StripConstraint(-1.0, 0.0, 2 * ctx.cb))


def phi_plus_family(ctx: HbarContext, dilog: Dilog | None = None) -> PentagonFamily:
    D = dilog or Dilog(ctx)
    fn = lambda x, y: phi_plus_closed(ctx, x, y, D)
    cb = ctx.cb
    poles = ("Psi(y + ic) poles: y = i(m b + n/b), m, n >= 0",
             "Psi(-x - y + ic) poles: x + y = -i(m b + n/b)",
             f"Psi(x - ic) poles: x = i{2 * cb:.4g} + i(m b + n/b)")
    return PentagonFamily(REAL_LINE, (fn,) * 5, "closed-form", f"phi-plus(hbar={ctx.hbar:g})",
                          poles=poles, rhs_decay=2 * math.pi / ctx.sqrt_hbar)


def imp_closed(ctx: HbarContext, x, y, dilog: Dilog | None = None):
    """e^{-i pi (x + y) y} Phi(y + i c) e^{i pi (1 + 1/hbar) / 12}."""
    D = dilog or Dilog(ctx)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    const = cmath.exp(1j * math.pi * (1 + 1 / ctx.hbar) / 12)
    out = np.exp(-1j * np.pi * (x + y) * y) * D.phi(y + 1j * ctx.cb) * const
    return out if np.ndim(out) else complex(out)


def imp_family(ctx: HbarContext, dilog: Dilog | None = None) -> PentagonFamily:
    D = dilog or Dilog(ctx)
    fn = lambda x, y: imp_closed(ctx, x, y, D)
    return PentagonFamily(REAL_LINE, (fn,) * 5, "closed-form", f"imp(hbar={ctx.hbar:g})",
                          poles=("y = i(m b + n/b), m, n >= 0",))


def _phi_minus_form(ctx: HbarContext, D: Dilog) -> _IntegralForm:
    a = Asymptotics((0.0, 0.0), (0.0, -2 * math.pi))
    cb = ctx.cb
    return _IntegralForm(0.0, 1.0, (
        _Term(D.phi, a, 1, 0.5, 0.0, (-math.inf, cb)),
        _Term(lambda s: 1 / D.phi(s), a.conjugate(), -1, 0.5, 0.0, (-cb, math.inf))))


def phi_minus(ctx: HbarContext, x, y, eps: float | None = None, tol: float = 1e-10,
              dilog: Dilog | None = None) -> complex:
    """int Phi(x/2 + t) / Phi(x/2 - t) e^{2 pi i t y} dt.

    With ``eps=None`` the integral is moved to a horizontal line where it
    converges absolutely.  With ``eps > 0`` the real-line integral is damped
    by e^{-eps t^2} instead (real x, y only); see :func:`phi_minus_extrapolated`.
    """
    D = dilog or Dilog(ctx)
    x, y = complex(x), complex(y)
    if eps is None:
        return _phi_minus_form(ctx, D).evaluate(x, y, tol)
    if not eps > 0:
        raise ValueError("eps must be positive")
    if x.imag or y.imag:
        raise OutsideStrip("the regulated form takes real arguments")
    span = math.sqrt(math.log(1 / tol) / eps) + abs(x)

    def integrand(t):
        return np.exp(2j * np.pi * t * y - eps * t * t) * D.phi(x / 2 + t) / D.phi(x / 2 - t)

    r = integrate_line(integrand, -span, span, tol=tol, max_intervals=400000)
    return r.value


def richardson(values: Sequence[complex], ratio: float = 2.0) -> tuple[complex, float]:
    """Richardson table for a sequence at h, h/ratio, ...; errors O(h), O(h^2), ...

    Returns the extrapolated value and the difference between the last two
    diagonal entries as an error estimate.
    """
    row = [complex(v) for v in values]
    diag = [row[-1]]
    k = 1
    while len(row) > 1:
        f = ratio ** k
        row = [(f * b - a) / (f - 1) for a, b in zip(row[:-1], row[1:])]
        diag.append(row[-1])
        k += 1
    err = abs(diag[-1] - diag[-2]) if len(diag) > 1 else math.inf
    return diag[-1], err


def phi_minus_extrapolated(ctx: HbarContext, x: float, y: float, eps0: float = 0.08,
                           levels: int = 4, tol: float = 1e-10,
                           dilog: Dilog | None = None) -> tuple[complex, float]:
    """Regulated phi-minus at eps0, eps0/2, ... extrapolated to eps -> 0."""
    D = dilog or Dilog(ctx)
    vals = [phi_minus(ctx, x, y, eps0 / 2 ** k, tol, D) for k in range(levels)]
    return richardson(vals)


def phi_minus_family(ctx: HbarContext, dilog: Dilog | None = None,
                     tol: float = 1e-10) -> PentagonFamily:
    D = dilog or Dilog(ctx)
    form = _phi_minus_form(ctx, D)
    fn = _pointwise(lambda x, y: form.evaluate(x, y, tol))
    return PentagonFamily(REAL_LINE, (fn,) * 5, "constructed", f"phi-minus(hbar={ctx.hbar:g})",
                          strips=(form.strip(),) * 5)


def euler_beta(a, b):
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) via log-gamma."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.exp(loggamma(a) + loggamma(b) - loggamma(a + b))
    return out if out.ndim else complex(out)


def beta_solution(eps: float, x, y):
    """B(2 pi i (x + y - i eps), -2 pi i (y + i eps))."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    a = 2j * np.pi * (x + y) + 2 * np.pi * eps
    b = -2j * np.pi * y + 2 * np.pi * eps
    for arg in (a, b, a + b):
        near = np.abs(arg - np.round(arg.real))
        if np.any((np.round(arg.real) <= 0) & (near < 1e-12)):
            raise PoleHit("Gamma pole in the Euler-beta solution")
    return euler_beta(a, b)


def beta_family(eps: float) -> PentagonFamily:
    fn = lambda x, y: beta_solution(eps, x, y)
    return PentagonFamily(REAL_LINE, (fn,) * 5, "closed-form", f"beta(eps={eps:g})",
                          poles=("a = 2 pi i (x+y) + 2 pi eps in -N", "b = -2 pi i y + 2 pi eps in -N"))


# ---------------------------------------------------------------------------
# samples and verification

@dataclass(frozen=True)
class SamplePoint:
    """Arguments of the five-term identity.

    ``z_offset`` fixes the horizontal z-contour R + i*z_offset (reals only);
    its tail rates are derived from the family when the check runs.
    """

    x: complex
    y: complex
    u: complex
    v: complex
    z_offset: float = 0.0

    def mirrored(self) -> "SamplePoint":
        return SamplePoint(-self.x, -self.y, -self.u, -self.v, -self.z_offset)

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "u": self.u, "v": self.v, "z_offset": self.z_offset}

    def rhs_args(self, z):
        """The three argument pairs of the z-integrand."""
        x, y, u, v = self.x, self.y, self.u, self.v
        return ((u + y, v - z), (x + y + u + v - z, z), (x + v, y - z))


def complexified_samples(rng: np.random.Generator, n: int, hbar: float, spread: float = 1.0,
                         scale: float = 0.05) -> list[SamplePoint]:
    """Im x = Im u = 4d, Im y = Im v = -2d and z on R - i d with d = scale / sqrt(hbar)."""
    d = scale / math.sqrt(hbar)
    out = []
    for _ in range(n):
        xr, yr, ur, vr = rng.uniform(-spread, spread, 4)
        out.append(SamplePoint(complex(xr, 4 * d), complex(yr, -2 * d), complex(ur, 4 * d),
                               complex(vr, -2 * d), -d))
    return out


def finite_samples(g: Group, rng: np.random.Generator, n: int) -> list[SamplePoint]:
    out = []
    for _ in range(n):
        x, y, u, v = (int(a) for a in rng.integers(0, g.n, 4))
        out.append(SamplePoint(x, y, u, v))
    return out


def pentagon_sides_finite(fam: PentagonFamily, s: SamplePoint) -> tuple[complex, complex, float]:
    """Exact LHS, RHS and the sum of |RHS terms| over a cyclic group."""
    g = fam.group
    T = tabulate(fam)
    n = g.n
    x, y, u, v = (int(round(complex(a).real)) % n for a in (s.x, s.y, s.u, s.v))
    z = g.elements()
    lhs = T[1][x, y] * T[3][u, v]
    (a4, b4), (a2, b2), (a0, b0) = s.rhs_args(z)
    terms = T[4][a4 % n, b4 % n] * T[2][a2 % n, b2 % n] * T[0][a0 % n, b0 % n]
    w = g.measure_scale
    # roundoff is judged against the family's own magnitude
    mag = max(float(np.sum(np.abs(terms)) * w), float(np.abs(T[1]).max() * np.abs(T[3]).max()))
    return complex(lhs), complex(np.sum(terms) * w), mag


def _probe_rate(F, offset: float) -> tuple[float, float]:
    """Empirical exponential decay rates of F along R + i*offset."""
    rates = []
    for sgn in (-1, 1):
        a, b = 6.0, 12.0
        fa = abs(complex(F(np.array([sgn * a + 1j * offset]))[0]))
        fb = abs(complex(F(np.array([sgn * b + 1j * offset]))[0]))
        if fb == 0:
            rates.append(10.0)
        elif fa == 0:
            rates.append(0.0)
        else:
            rates.append(math.log(fa / fb) / (b - a))
    return rates[0], rates[1]


def pentagon_sides(fam: PentagonFamily, s: SamplePoint, quad_tol: float = 1e-10,
                   ) -> tuple[complex, complex, float, float]:
    """(LHS, RHS, quadrature error, magnitude scale) of the identity at ``s``."""
    g = fam.group
    if fam.distributional:
        raise DistributionalInput(f"{fam.name} is distributional")
    if g.kind == CYCLIC:
        lhs, rhs, mag = pentagon_sides_finite(fam, s)
        return lhs, rhs, 0.0, mag
    lhs = complex(fam(1, s.x, s.y)) * complex(fam(3, s.u, s.v))

    def integrand(z):
        (a4, b4), (a2, b2), (a0, b0) = s.rhs_args(z)
        return fam(4, a4, b4) * fam(2, a2, b2) * fam(0, a0, b0)

    if g.kind == REALS:
        # strips depend on imaginary parts only: one representative z suffices
        for j, (a, b) in zip((4, 2, 0), s.rhs_args(1j * s.z_offset)):
            fam.check(j, a, b)
        if fam.rhs_decay is not None:
            left = right = 0.9 * fam.rhs_decay
        else:
            left, right = _probe_rate(integrand, s.z_offset)
            if not (left > 0.05 and right > 0.05):
                raise NonConvergent(f"z-integrand does not decay (rates {left:.3g}, {right:.3g})")
            left, right = 0.8 * left, 0.8 * right
        c = Contour.horizontal(s.z_offset, (left, right))
        r = integrate_contour(integrand, c, tol=max(quad_tol * abs(lhs), 1e-15))
        return lhs, r.value * g.measure_scale, r.err_estimate * g.measure_scale, 0.0
    if g.kind == CIRCLE:
        r = integrate_line(integrand, 0.0, 1.0, tol=max(quad_tol * abs(lhs), 1e-15))
        return lhs, r.value * g.measure_scale, r.err_estimate * g.measure_scale, 0.0
    if g.kind == INTEGERS:
        rhs = haar_integrate(integrand, g, tol=quad_tol, decay=fam.rhs_decay)
        return lhs, rhs, 0.0, 0.0
    raise ValueError(f"unsupported group {g}")


def verify_pentagon(fam: PentagonFamily, samples: Sequence[SamplePoint], tol: float,
                    quad_tol: float = 1e-10, suite: str = "pentagon") -> VerificationReport:
    rep = VerificationReport(suite, {"family": fam.name, "group": str(fam.group)}, tol)
    for s in samples:
        try:
            lhs, rhs, qe, mag = pentagon_sides(fam, s, quad_tol)
            rep.points.append(PointRecord.compare(s.as_dict(), lhs, rhs, qe, mag))
        except BetaPentaError as exc:
            rep.points.append(PointRecord.failed(s.as_dict(), exc))
    return rep


def cross_check_forms(fam: PentagonFamily, points: Sequence[tuple[complex, complex]],
                      tol: float, j: int = 0) -> VerificationReport:
    """Compare the primary and the alternative evaluator of ``phi_j``."""
    if fam.alt_functions is None:
        raise ValueError(f"{fam.name} has no second evaluator")
    rep = VerificationReport("cross-form", {"family": fam.name, "j": j}, tol)
    for x, y in points:
        inputs = {"x": complex(x), "y": complex(y)}
        try:
            rep.points.append(PointRecord.compare(inputs, fam(j, x, y),
                                                  fam.alt_functions[j](x, y)))
        except BetaPentaError as exc:
            rep.points.append(PointRecord.failed(inputs, exc))
    return rep


def strip_grid(hbar: float, n: int = 3, re_values: Sequence[float] = (-0.6, 0.1, 0.7),
               scale: float = 0.05) -> list[tuple[complex, complex]]:
    """n x n complexified grid inside the phi-plus strip."""
    d = scale / math.sqrt(hbar)
    out = []
    for a, b in _iproduct(re_values[:n], re_values[::-1][:n]):
        out.append((complex(a, 4 * d), complex(b, -2 * d)))
    return out
