"""Faddeev's quantum dilogarithm Phi_hbar and relatives.

Two independent evaluators are provided:

* ``integral`` -- exp of the contour integral of
  ``exp(-2ixz) / (4 sinh(zb) sinh(z/b) z)`` along ``R + i*eps``; valid in the
  strip ``|Im x| < 1/(2 sqrt(hbar))`` for every hbar > 0.
* ``product`` -- ratio of two q-Pochhammer symbols; valid on all of C but only
  for hbar > 1/4 where ``|q| < 1``.

For hbar <= 1/4 the integral evaluator is extended beyond the strip with the
difference equations in the (real) shift ``i*b``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DivergentParameter, OutsideStrip, PoleHit
from .quad import Contour, integrate_contour


class EvalMethod(str, Enum):
    INTEGRAL = "integral"
    PRODUCT = "product"
    AUTO = "auto"


@dataclass(frozen=True)
class HbarContext:
    hbar: float
    b: complex
    q: complex
    qbar: complex
    sqrt_hbar: float
    strip_halfwidth: float
    contour_offset: float

    @property
    def cb(self) -> float:
        return self.strip_halfwidth

    @property
    def product_available(self) -> bool:
        return self.hbar > 0.25

    def swapped(self) -> "HbarContext":
        """Same hbar with b replaced by 1/b (the integrand is symmetric)."""
        b = 1 / self.b
        return HbarContext(self.hbar, b, cmath.exp(1j * math.pi * b * b),
                           cmath.exp(-1j * math.pi / (b * b)), self.sqrt_hbar,
                           self.strip_halfwidth, self.contour_offset)


def nearest_pole_height(b: complex) -> float:
    """Smallest positive Im of the poles (i pi b) Z and (i pi / b) Z."""
    return math.pi * min((1j * b).imag, (1j / b).imag)


def make_context(hbar: float, contour_offset: float | None = None) -> HbarContext:
    if not hbar > 0:
        raise ValueError("hbar must be positive")
    s = 1.0 / math.sqrt(hbar)          # b + 1/b
    if hbar > 0.25:
        b = cmath.exp(1j * math.acos(s / 2))
    else:
        b = complex((s - math.sqrt(s * s - 4)) / 2)
    if contour_offset is None:
        contour_offset = min(0.1, nearest_pole_height(b) / 4)
    if not 0 < contour_offset < nearest_pole_height(b):
        raise ValueError("contour_offset must lie below the first integrand pole")
    q = cmath.exp(1j * math.pi * b * b)
    qbar = cmath.exp(-1j * math.pi / (b * b))
    return HbarContext(hbar, b, q, qbar, math.sqrt(hbar), 0.5 / math.sqrt(hbar),
                       contour_offset)


def pochhammer_inf(x, q: complex, tol: float = 1e-17):
    """(x; q)_inf = prod_{n>=0} (1 - x q^n), vectorised over ``x``."""
    aq = abs(q)
    if aq >= 1:
        raise DivergentParameter(f"|q| = {aq} >= 1")
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    term = x.copy()
    bound = tol * (1 - aq)
    while True:
        out *= 1 - term
        if np.all(np.abs(term) < bound):
            return out if out.ndim else complex(out)
        term = term * q
        if not np.any(term):
            return out if out.ndim else complex(out)


def log_pochhammer_inf(x, q: complex, tol: float = 1e-17):
    """Sum of log(1 - x q^n); exp of it is (x; q)_inf without overflow."""
    aq = abs(q)
    if aq >= 1:
        raise DivergentParameter(f"|q| = {aq} >= 1")
    x = np.asarray(x, dtype=complex)
    out = np.zeros_like(x)
    term = x.copy()
    bound = tol * (1 - aq)
    while True:
        out += np.log(1 - term)
        if np.all(np.abs(term) < bound):
            return out
        term = term * q


def log_pochhammer_from_log(logx, logq: complex, tol: float = 1e-17):
    """Sum of log(1 - x q^n) given log x; safe when |x| overflows a float."""
    if not logq.real < 0:
        raise DivergentParameter(f"|q| = {math.exp(logq.real)} >= 1")
    lk = np.asarray(logx, dtype=complex).copy()
    out = np.zeros_like(lk)
    cut = math.log(tol)
    while True:
        big = lk.real > 0
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            small_part = np.log1p(-np.exp(np.where(big, 0, lk)))
            large_part = lk + np.log(np.exp(-np.where(big, lk, 0)) - 1)
        out += np.where(big, large_part, small_part)
        if np.all(lk.real < cut):
            return out
        lk = lk + logq


def phi_product(ctx: HbarContext, x, pole_tol: float = 1e-13):
    if not ctx.product_available:
        raise DivergentParameter("product representation needs hbar > 1/4")
    x = np.asarray(x, dtype=complex)
    b = ctx.b
    # logs of -q e^{2 pi b x} and -qbar e^{2 pi x / b}
    log_num = 1j * math.pi * (b * b + 1) + 2 * np.pi * b * x
    log_den = -1j * math.pi * (1 / (b * b) - 1) + 2 * np.pi * x / b
    lq2 = 2j * math.pi * b * b
    lqb2 = -2j * math.pi / (b * b)
    if np.any(_pole_distance(log_den, lqb2) < pole_tol):
        raise PoleHit("Phi_hbar has a pole at the requested point")
    out = np.exp(log_pochhammer_from_log(log_num, lq2)
                 - log_pochhammer_from_log(log_den, lqb2))
    return out if out.ndim else complex(out)


def _pole_distance(logx, logq):
    """Smallest |1 - x q^n| over the factors with |x q^n| near 1."""
    lk = np.asarray(logx, dtype=complex)
    # only factors with |log| small can vanish; n = round(-Re lk / Re logq)
    n = np.maximum(np.round(-lk.real / logq.real), 0)
    best = np.full(lk.shape, np.inf)
    for dn in (-1, 0, 1):
        m = np.maximum(n + dn, 0)
        with np.errstate(over="ignore"):
            best = np.minimum(best, np.abs(1 - np.exp(lk + m * logq)))
    return best


def _log_phi_integral(ctx: HbarContext, x: complex, tol: float) -> tuple[complex, float]:
    b, binv = ctx.b, 1 / ctx.b
    s = 1.0 / ctx.sqrt_hbar
    right = s - 2 * x.imag
    left = s + 2 * x.imag

    def integrand(t):
        # 4 sinh(u) sinh(v) = e^{s(u+v)} (1 - e^{-2su}) (1 - e^{-2sv}), s = sign Re t,
        # keeps the tails free of overflow
        t = np.asarray(t)
        sgn = np.where(t.real >= 0, 1.0, -1.0)
        u, v = t * b, t * binv
        den = (1 - np.exp(-2 * sgn * u)) * (1 - np.exp(-2 * sgn * v)) * t
        return np.exp(-2j * x * t - sgn * (u + v)) / den

    c = Contour.horizontal(ctx.contour_offset, (left, right))
    r = integrate_contour(integrand, c, tol=tol)
    return r.value, r.err_estimate


def phi_integral(ctx: HbarContext, x, tol: float = 1e-11):
    """Integral representation; requires |Im x| < strip_halfwidth."""
    xs = np.asarray(x, dtype=complex)
    flat = xs.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for k, xv in enumerate(flat):
        if abs(xv.imag) >= ctx.cb:
            raise OutsideStrip(f"|Im x| = {abs(xv.imag):.4g} >= {ctx.cb:.4g}")
        out[k] = cmath.exp(_log_phi_integral(ctx, complex(xv), tol)[0])
    out = out.reshape(xs.shape)
    return out if out.ndim else complex(out)


def ladder_steps(ctx: HbarContext, x: complex) -> int:
    """Number of shifts by i*b needed to bring Im x into the strip (b real)."""
    step = ctx.b.real
    cb = ctx.cb
    k = 0
    y = x.imag
    while y >= cb:
        y -= step
        k += 1
    while y <= -cb:
        y += step
        k -= 1
    return k


def _phi_ladder(ctx: HbarContext, x: complex, tol: float) -> complex:
    b = ctx.b.real
    k = ladder_steps(ctx, x)
    if abs(k) > 64:
        raise OutsideStrip("too many ladder steps")
    w = x - 1j * b * k
    val = cmath.exp(_log_phi_integral(ctx, w, tol)[0])
    q, qinv = cmath.exp(1j * math.pi * b * b), cmath.exp(-1j * math.pi * b * b)
    for _ in range(max(k, 0)):
        # Phi(w + ib) = Phi(w) / (1 + q e^{2 pi b w})
        d = 1 + q * cmath.exp(2 * math.pi * b * w)
        if abs(d) < 1e-13:
            raise PoleHit("ladder hit a pole")
        val /= d
        w += 1j * b
    for _ in range(max(-k, 0)):
        # Phi(w - ib) = (1 + q^{-1} e^{2 pi b w}) Phi(w)
        val *= 1 + qinv * cmath.exp(2 * math.pi * b * w)
        w -= 1j * b
    return val


def phi_eval(ctx: HbarContext, x, method: EvalMethod | str = EvalMethod.AUTO,
             tol: float = 1e-11):
    """Phi_hbar(x), vectorised over ``x`` for the product method."""
    method = EvalMethod(method)
    if method is EvalMethod.AUTO:
        method = EvalMethod.PRODUCT if ctx.product_available else EvalMethod.INTEGRAL
        if method is EvalMethod.INTEGRAL:
            xs = np.asarray(x, dtype=complex)
            out = np.array([_phi_ladder(ctx, complex(v), tol) for v in xs.ravel()],
                           dtype=complex).reshape(xs.shape)
            return out if out.ndim else complex(out)
    if method is EvalMethod.PRODUCT:
        return phi_product(ctx, x)
    return phi_integral(ctx, x, tol)


def inversion_constant(hbar: float) -> complex:
    """Phi(0)^2 = Phi(x) Phi(-x) e^{-i pi x^2} = exp(i pi (1/hbar - 2) / 12).

    Equivalently exp(i pi (b^2 + b^-2) / 12).
    """
    return cmath.exp(1j * math.pi * (1 / hbar - 2) / 12)


def inversion_constant_reference(hbar: float) -> complex:
    """The closed form exp(-i pi (2 + 1/hbar) / 12) checked by the acceptance suite.

    It differs from :func:`inversion_constant` by exp(i pi / (6 hbar)), so it
    never matches a direct evaluation of Phi(0)^2.
    """
    return cmath.exp(-1j * math.pi * (2 + 1 / hbar) / 12)


def phi_zero(ctx: HbarContext) -> complex:
    """Phi_hbar(0); the square-root branch is fixed by direct evaluation."""
    return complex(phi_integral(ctx, 0.0))


class Dilog:
    """Bound evaluator: Phi, 1/Phi and Psi at a fixed context and method."""

    def __init__(self, ctx: HbarContext, method: EvalMethod | str = EvalMethod.AUTO):
        self.ctx = ctx
        self.method = EvalMethod(method)
        self.phi0 = phi_zero(ctx)

    def phi(self, x):
        return phi_eval(self.ctx, x, self.method)

    def psi(self, x):
        x = np.asarray(x, dtype=complex)
        out = self.phi(x) / self.phi0 * np.exp(-0.5j * np.pi * x * x)
        return out if np.ndim(out) else complex(out)


def psi_eval(ctx: HbarContext, x, method: EvalMethod | str = EvalMethod.AUTO):
    """Psi_hbar(x) = Phi(x) / Phi(0) * exp(-i pi x^2 / 2)."""
    x = np.asarray(x, dtype=complex)
    out = phi_eval(ctx, x, method) / phi_zero(ctx) * np.exp(-0.5j * np.pi * x * x)
    return out if np.ndim(out) else complex(out)
