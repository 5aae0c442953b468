"""Five-tuples of functions satisfying the Faddeev-type pentagon.

A tuple is never handled as operator data.  It is checked through the
equivalent Fourier-side identity

    ft1(x) ft3(y) = e^{-2 pi i x y} int ft4(y - z) ft2(z) ft0(x - z) e^{i pi z^2} dz

with ``ft(x) = int e^{-2 pi i x y} f(y) dy``, and through its complex
conjugate.  Transforms that are only boundary values of analytic functions
(the quantum dilogarithm case) carry the side they are approached from, and
the z-contour is indented around their real singularities accordingly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DistributionalInput, DomainError, NonConvergent
from .qdilog import Dilog, HbarContext
from .quad import Contour, integrate_contour
from .report import PointRecord, VerificationReport

Func = Callable[[np.ndarray], np.ndarray]

# Finite stand-in for super-exponential decay; tails are still probed.
GAUSSIAN_RATE = 4.0


@dataclass(frozen=True)
class Asymptotics:
    """Exponential envelope  log|f(s + i sigma)| ~ s * (slope + coupling * sigma).

    ``left`` and ``right`` hold (slope, coupling) for s -> -inf and s -> +inf.
    ``gaussian`` marks super-exponential decay in both directions.
    """

    left: tuple[float, float] = (0.0, 0.0)
    right: tuple[float, float] = (0.0, 0.0)
    gaussian: bool = False

    def conjugate(self) -> "Asymptotics":
        (ls, lc), (rs, rc) = self.left, self.right
        return Asymptotics((ls, -lc), (rs, -rc), self.gaussian)

    def reflected(self) -> "Asymptotics":
        (ls, lc), (rs, rc) = self.left, self.right
        return Asymptotics((-rs, rc), (-ls, lc), self.gaussian)

    def growth(self, direction: int, sigma: float) -> float:
        """Growth of log|f| per unit |s| as Re(argument) -> direction * inf."""
        if self.gaussian:
            return -GAUSSIAN_RATE
        if direction > 0:
            s, c = self.right
            return s + c * sigma
        s, c = self.left
        return -(s + c * sigma)


def exp_linear(coef_imag: float) -> Asymptotics:
    """Envelope of e^{2 pi i y t} as a function of t, given Im y."""
    slope = -2 * math.pi * coef_imag
    return Asymptotics((slope, 0.0), (slope, 0.0))


CHIRP = Asymptotics((0.0, -2 * math.pi), (0.0, -2 * math.pi))   # e^{+i pi t^2}
ANTICHIRP = CHIRP.conjugate()                                   # e^{-i pi t^2}
FLAT = Asymptotics()


def decay_rates(factors, height: float) -> tuple[float, float]:
    """(left, right) exponential decay rates of a product of factors.

    ``factors`` holds (asymptotics, sign, offset) meaning ``g(sign * t + offset)``
    with ``t`` running along R + i*height.  A rate <= 0 means no decay.
    """
    rates = []
    for end in (-1, 1):
        total = 0.0
        for asym, sign, offset in factors:
            sigma = sign * height + complex(offset).imag
            total += asym.growth(end * sign, sigma)
        rates.append(-total)
    return rates[0], rates[1]


@dataclass(frozen=True)
class FaddeevTuple:
    name: str
    f: tuple[Func, ...]
    fbar: tuple[Func, ...]
    asym: tuple[Asymptotics, ...]
    ftilde: tuple[Func, ...] | None = None
    ftilde_bar: tuple[Func, ...] | None = None
    asym_tilde: tuple[Asymptotics, ...] | None = None
    # real singular points of each ftilde and the side (+1 above, -1 below)
    # from which the boundary value is taken
    tilde_singular: tuple[tuple[float, ...], ...] = ((),) * 5
    tilde_side: tuple[int, ...] = (0,) * 5
    square_integrable: bool = False
    tilde_source: str | None = None
    ctx: HbarContext | None = None
    # open bands (lo, hi) of Im(argument) where f, fbar, ftilde, ftilde_bar
    # are analytic
    band: tuple[float, float] = (-math.inf, math.inf)
    bar_band: tuple[float, float] = (-math.inf, math.inf)
    tilde_band: tuple[float, float] = (-math.inf, math.inf)
    tilde_bar_band: tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self):
        for seq in (self.f, self.fbar, self.asym):
            if len(seq) != 5:
                raise ValueError("a Faddeev tuple has exactly five components")

    @property
    def has_tilde(self) -> bool:
        return self.ftilde is not None

    def tilde_asym(self, j: int) -> Asymptotics:
        return self.asym_tilde[j]


def _five(x):
    return (x,) * 5


def make_constant() -> FaddeevTuple:
    one = lambda x: np.ones_like(np.asarray(x, dtype=complex))
    return FaddeevTuple("constant", _five(one), _five(one), _five(FLAT),
                        square_integrable=False)


def make_gaussian(a: Sequence[complex], bcoef: Sequence[complex]) -> FaddeevTuple:
    """f_j(x) = a_j exp(-b_j x^2) with closed-form transforms."""
    a = [complex(v) for v in a]
    bcoef = [complex(v) for v in bcoef]
    if len(a) != 5 or len(bcoef) != 5:
        raise ValueError("need five amplitudes and five widths")
    if any(bj.real <= 0 for bj in bcoef):
        raise ValueError("Gaussian widths need a positive real part")
    f, fb, ft, ftb = [], [], [], []
    for aj, bj in zip(a, bcoef):
        amp = aj * cmath.sqrt(math.pi / bj)
        f.append(lambda x, aj=aj, bj=bj: aj * np.exp(-bj * np.asarray(x) ** 2))
        fb.append(lambda x, aj=aj, bj=bj: aj.conjugate() * np.exp(-bj.conjugate() * np.asarray(x) ** 2))
        ft.append(lambda x, amp=amp, bj=bj: amp * np.exp(-math.pi ** 2 * np.asarray(x) ** 2 / bj))
        ftb.append(lambda x, amp=amp, bj=bj: amp.conjugate()
                   * np.exp(-math.pi ** 2 * np.asarray(x) ** 2 / bj.conjugate()))
    g = Asymptotics(gaussian=True)
    return FaddeevTuple("gaussian", tuple(f), tuple(fb), _five(g), tuple(ft), tuple(ftb),
                        _five(g), square_integrable=True, tilde_source="closed-form")


def gaussian_constraints(a: Sequence[complex], bcoef: Sequence[complex]) -> dict[str, complex]:
    """Residuals of the matching conditions for a Gaussian candidate.

    With Fourier-side widths B_j = pi^2 / b_j and D = B0 + B2 + B4 - i pi,
    completing the square in the z-integral gives four conditions.
    """
    B = [math.pi ** 2 / complex(bj) for bj in bcoef]
    A = [complex(aj) * cmath.sqrt(math.pi / complex(bj)) for aj, bj in zip(a, bcoef)]
    D = B[0] + B[2] + B[4] - 1j * math.pi
    return {
        "cross": 2 * B[0] * B[4] / D - 2j * math.pi,
        "x2": B[1] - (B[0] - B[0] ** 2 / D),
        "y2": B[3] - (B[4] - B[4] ** 2 / D),
        "amplitude": A[1] * A[3] - A[0] * A[2] * A[4] * cmath.sqrt(math.pi / D),
        "convergence": complex(D.real > 0),
    }


def gaussian_solution(beta: complex = 1 + 4j) -> tuple[list[complex], list[complex]]:
    """A Gaussian tuple solving all matching conditions.

    Taking B0 = B4 = beta forces D = beta^2 / (i pi), B1 = B3 = beta - i pi and
    B2 = D - 2 beta + i pi.  Every width has positive real part iff
    Re beta > 0 and Im beta > pi; real widths never satisfy the cross term.
    """
    beta = complex(beta)
    if not (beta.real > 0 and beta.imag > math.pi):
        raise ValueError("need Re(beta) > 0 and Im(beta) > pi")
    D = beta * beta / (1j * math.pi)
    B = [beta, beta - 1j * math.pi, D - 2 * beta + 1j * math.pi, beta - 1j * math.pi, beta]
    bcoef = [math.pi ** 2 / Bj for Bj in B]
    amp = [cmath.sqrt(math.pi / bj) for bj in bcoef]
    a = [1, 1, 1, 1, 1]
    target = amp[0] * amp[2] * amp[4] * cmath.sqrt(math.pi / D)
    a[3] = target / (amp[1] * amp[3])
    return [complex(v) for v in a], bcoef


def real_widths_admissible(B0: float, B2: float, B4: float) -> bool:
    """Whether real positive Fourier widths can meet the cross-term condition.

    2 B0 B4 / D = 2 pi i with D = B0 + B2 + B4 - i pi means
    B0 B4 - pi^2 = i pi (B0 + B2 + B4); the left side is real and the right
    side has imaginary part pi (B0 + B2 + B4) > 0, so this is always False.
    """
    lhs = B0 * B4 - math.pi ** 2
    rhs = 1j * math.pi * (B0 + B2 + B4)
    return abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))


def make_phi(ctx: HbarContext, dilog: Dilog | None = None) -> FaddeevTuple:
    """All five components equal to Phi_hbar."""
    D = dilog or Dilog(ctx)
    cb = ctx.cb
    const = cmath.exp(1j * math.pi * (1 + 1 / ctx.hbar) / 12)

    def phi(x):
        return D.phi(x)

    def phibar(x):
        return 1 / D.phi(x)

    def ft(t):
        t = np.asarray(t, dtype=complex)
        return const * np.exp(-1j * np.pi * t * t) * D.phi(-t + 1j * cb)

    def ftb(t):
        t = np.asarray(t, dtype=complex)
        return const.conjugate() * np.exp(1j * np.pi * t * t) / D.phi(-t - 1j * cb)

    a = Asymptotics((0.0, 0.0), (0.0, -2 * math.pi))
    at = Asymptotics((2 * math.pi * cb, 0.0), (0.0, 2 * math.pi))
    return FaddeevTuple("phi", _five(phi), _five(phibar), _five(a), _five(ft), _five(ftb),
                        _five(at), tilde_singular=_five((0.0,)), tilde_side=_five(1),
                        square_integrable=False, tilde_source="closed-form", ctx=ctx,
                        band=(-math.inf, cb), bar_band=(-cb, math.inf),
                        tilde_band=(0.0, math.inf), tilde_bar_band=(-math.inf, 0.0))


def make_reflected(t: FaddeevTuple) -> FaddeevTuple:
    """g_j(x) = f_j(-x); transforms and singular data are mirrored."""
    neg = lambda g: (lambda x, g=g: g(-np.asarray(x)))
    ft = tuple(neg(g) for g in t.ftilde) if t.ftilde else None
    ftb = tuple(neg(g) for g in t.ftilde_bar) if t.ftilde_bar else None
    at = tuple(a.reflected() for a in t.asym_tilde) if t.asym_tilde else None
    name = t.name[len("reflected-"):] if t.name.startswith("reflected-") else "reflected-" + t.name
    return replace(t, name=name,
                   f=tuple(neg(g) for g in t.f), fbar=tuple(neg(g) for g in t.fbar),
                   asym=tuple(a.reflected() for a in t.asym), ftilde=ft, ftilde_bar=ftb,
                   asym_tilde=at,
                   tilde_singular=tuple(tuple(-p for p in ps) for ps in t.tilde_singular),
                   tilde_side=tuple(-s for s in t.tilde_side),
                   band=_mirror(t.band), bar_band=_mirror(t.bar_band),
                   tilde_band=_mirror(t.tilde_band), tilde_bar_band=_mirror(t.tilde_bar_band))


def _mirror(band):
    return (-band[1], -band[0])


def tilde_by_quadrature(t: FaddeevTuple, j: int, x: complex, offset: float = 0.0,
                        tol: float = 1e-12) -> complex:
    """ft_j(x) = int e^{-2 pi i x y} f_j(y) dy along R + i*offset."""
    x = complex(x)
    factors = [(exp_linear(-x.imag), 1, 0.0), (t.asym[j], 1, 0.0)]
    left, right = decay_rates(factors, offset)
    if not (left > 0 and right > 0):
        raise NonConvergent(f"Fourier integral of f_{j} does not converge at x={x}")
    fj = t.f[j]
    r = integrate_contour(lambda y: np.exp(-2j * np.pi * x * y) * fj(y),
                          Contour.horizontal(offset, (left, right)), tol=tol)
    return r.value


# ---------------------------------------------------------------------------
# Fourier-side five-term identity


def indented_contour(marks: Sequence[tuple[float, int]], kappa: float,
                     rates: Callable[[float, float], tuple[float, float]]) -> Contour:
    """Horizontal contour passing above (+1) or below (-1) each marked point.

    ``rates(left_height, right_height)`` must return the tail decay rates.
    Coincident marks with opposite sides pinch the contour and are rejected.
    """
    marks = sorted((float(p), int(s)) for p, s in marks if s != 0)
    if not marks:
        left, right = rates(0.0, 0.0)
        return Contour.horizontal(0.0, (left, right))
    for (p, s), (q, r) in zip(marks[:-1], marks[1:]):
        if s != r and abs(p - q) < 3 * kappa:
            raise DomainError(f"contour pinched between {p} and {q}")
    verts = [complex(marks[0][0] - 1, marks[0][1] * kappa)]
    for (p, s), (q, r) in zip(marks[:-1], marks[1:]):
        m = 0.5 * (p + q)
        verts.append(complex(m, s * kappa))
        if r != s:
            verts.append(complex(m, r * kappa))
    verts.append(complex(marks[-1][0] + 1, marks[-1][1] * kappa))
    left, right = rates(verts[0].imag, verts[-1].imag)
    if not (left > 0 and right > 0):
        raise NonConvergent("z-integrand of the five-term identity does not decay")
    return Contour.through(verts, (left, right))


def _identity_point(t: FaddeevTuple, x: float, y: float, conjugate: bool, quad_tol: float):
    ft = t.ftilde_bar if conjugate else t.ftilde
    sgn = -1 if conjugate else 1
    asym = [a.conjugate() if conjugate else a for a in t.asym_tilde]
    marks = []
    for p in t.tilde_singular[2]:
        marks.append((p, sgn * t.tilde_side[2]))
    for p in t.tilde_singular[4]:
        marks.append((y - p, -sgn * t.tilde_side[4]))
    for p in t.tilde_singular[0]:
        marks.append((x - p, -sgn * t.tilde_side[0]))
    pts = [p for p, _ in marks]
    gaps = [abs(a - b) for i, a in enumerate(pts) for b in pts[i + 1:]]
    kappa = min([0.1] + [g / 3 for g in gaps if g > 0])
    kernel = CHIRP if not conjugate else ANTICHIRP

    def rates(hl, hr):
        def at(h):
            return decay_rates([(asym[4], -1, y), (asym[2], 1, 0.0), (asym[0], -1, x),
                                (kernel, 1, 0.0)], h)
        return at(hl)[0], at(hr)[1]

    c = indented_contour(marks, kappa, rates)
    f0, f2, f4 = ft[0], ft[2], ft[4]

    def integrand(z):
        return f4(y - z) * f2(z) * f0(x - z) * np.exp(sgn * 1j * np.pi * z * z)

    # boundary values off the real axis on the LHS
    lhs = complex(ft[1](np.asarray(x + 0j))) * complex(ft[3](np.asarray(y + 0j)))
    r = integrate_contour(integrand, c, tol=max(quad_tol * abs(lhs), 1e-14))
    rhs = np.exp(-sgn * 2j * np.pi * x * y) * r.value
    return lhs, rhs, r.err_estimate


def _identity_report(t, samples, tol, conjugate, quad_tol):
    if not t.has_tilde:
        raise DistributionalInput(f"tuple {t.name!r} has no function-valued Fourier transform")
    suite = "faddeev-conjugate-identity" if conjugate else "faddeev-identity"
    rep = VerificationReport(suite, {"tuple": t.name}, tol)
    for x, y in samples:
        inputs = {"x": float(x), "y": float(y)}
        try:
            lhs, rhs, qe = _identity_point(t, float(x), float(y), conjugate, quad_tol)
            rep.points.append(PointRecord.compare(inputs, lhs, rhs, qe))
        except (NonConvergent, DomainError) as exc:
            rep.points.append(PointRecord.failed(inputs, exc))
    return rep


def verify_eq50(t: FaddeevTuple, samples: Sequence[tuple[float, float]], tol: float = 1e-6,
                quad_tol: float = 1e-11) -> VerificationReport:
    """Check the Fourier-side five-term identity at real sample pairs (x, y)."""
    return _identity_report(t, samples, tol, False, quad_tol)


def verify_conjugate_identity(t: FaddeevTuple, samples: Sequence[tuple[float, float]], tol: float = 1e-6,
                quad_tol: float = 1e-11) -> VerificationReport:
    """The complex-conjugate identity (e^{-i pi z^2} kernel)."""
    return _identity_report(t, samples, tol, True, quad_tol)


def sample_pairs(rng: np.random.Generator, n: int, singular: Sequence[float] = (0.0,),
                 lo: float = -1.0, hi: float = 1.0, min_gap: float = 0.05):
    """Seeded real pairs kept away from coincidences that would pinch the contour."""
    out = []
    while len(out) < n:
        x, y = rng.uniform(lo, hi, 2)
        pts = [x, y, x - y] + [x - p for p in singular] + [y - p for p in singular]
        if min(abs(v) for v in pts) < min_gap:
            continue
        out.append((float(x), float(y)))
    return out
