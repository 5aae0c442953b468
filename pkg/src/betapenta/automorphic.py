"""Periodisation of pentagon families over the subgroup Z of R.

A family over R is automorphic with data (g, h) when

    phi_i(x + b, y) = gamma_i h_y(b) phi_i(x, y),     b in Z,

with h_x(m) = e^{-i pi c m x}.  Summing over the second argument,

    psi_i(x, y) = sum_m phi_i(x, y + m) mu_i^m h_{x+m}(m),

produces five quasi-periodic functions whose five-term identity integrates
over one period of z only.  Haar measures: counting measure on Z, total mass
one on R/Z.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (AutomorphicityViolation, BetaPentaError, InvalidHomomorphism,
                     NonConvergent)
from .lca import CIRCLE, INTEGERS, REALS, Group
from .pentagon import PentagonFamily, SamplePoint, richardson
from .quad import integrate_line
from .report import PointRecord, VerificationReport

STRIP = "strip"
REGULATOR = "regulator"


def _unit(z, name):
    z = complex(z)
    if abs(abs(z) - 1) > 1e-12:
        raise ValueError(f"{name} must be a unit complex number, got |{name}| = {abs(z)}")
    return z


@dataclass(frozen=True)
class AutomorphicData:
    """Data (B = Z, g, h) plus the characters alpha, beta of Z.

    Characters of Z are stored as their value at the generator 1.
    """

    g: tuple[complex, complex, complex]
    c: int
    alpha: complex
    beta: complex
    gamma: tuple[complex, ...] = field(init=False)
    mu: tuple[complex, ...] = field(init=False)
    ambient: Group = field(default=Group(REALS), init=False)
    subgroup: Group = field(default=Group(INTEGERS), init=False)
    quotient: Group = field(default=Group(CIRCLE), init=False)

    def __post_init__(self):
        g0, g1, g2 = self.g
        gamma = (g0, g0 * g1, g1, g1 * g2, g2)
        a, b = self.alpha, self.beta
        mu = (a * gamma[3], a, a * b * gamma[0] * gamma[2] * gamma[4], b, b * gamma[1])
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "mu", mu)

    def h(self, x, m):
        """h_x(m) = e^{-i pi c m x}."""
        return np.exp(-1j * np.pi * self.c * np.asarray(m) * np.asarray(x))

    def eps(self, m):
        """eps(m) = h_m(m)."""
        return self.h(m, m)


def make_data(g0: complex = 1.0, g1: complex = 1.0, alpha: complex = 1.0,
              beta: complex = 1.0, c: float = 1, g2: complex = 1.0) -> AutomorphicData:
    """Build and validate automorphicity data.

    The bilinear condition h_m(n) h_n(m) = e^{-2 pi i c m n} = 1 on Z reduces
    to its value at m = n = 1, which forces c to be an integer.
    """
    g = tuple(_unit(v, n) for v, n in ((g0, "g0"), (g1, "g1"), (g2, "g2")))
    alpha, beta = _unit(alpha, "alpha"), _unit(beta, "beta")
    if abs(cmath.exp(-2j * math.pi * c) - 1) > 1e-12:
        raise InvalidHomomorphism(f"h_1(1) h_1(1) = e^(-2 pi i c) != 1 for c = {c}")
    return AutomorphicData(g, int(round(c)), alpha, beta)


def check_automorphic(fam: PentagonFamily, data: AutomorphicData,
                      points: Sequence[tuple[complex, complex]], shifts: Sequence[int] = (1, -1, 2),
                      tol: float = 1e-8) -> float:
    """Max relative defect of phi_i(x + b, y) = gamma_i h_y(b) phi_i(x, y)."""
    worst = 0.0
    for i in range(5):
        for x, y in points:
            base = complex(fam(i, x, y))
            for b in shifts:
                want = data.gamma[i] * complex(data.h(y, b)) * base
                got = complex(fam(i, x + b, y))
                scale = max(abs(want), abs(got), 1e-300)
                worst = max(worst, abs(got - want) / scale)
    if worst > tol:
        raise AutomorphicityViolation(f"automorphicity defect {worst:.3e} exceeds {tol:.1e}")
    return worst


# ---------------------------------------------------------------------------
# summation over Z

@dataclass(frozen=True)
class SumResult:
    value: complex
    tail_bound: float
    terms: int


def _strip_sum(term: Callable[[np.ndarray], np.ndarray], tol: float, max_terms: int,
               chunk: int = 16) -> SumResult:
    """Sum term(m) over Z outward from 0 until both tails are geometric and small."""
    total = complex(np.sum(term(np.arange(-chunk + 1, chunk))))
    count = 2 * chunk - 1
    tail = 0.0
    for direction in (1, -1):
        start = chunk
        while True:
            ms = direction * np.arange(start, start + chunk)
            vals = np.asarray(term(ms), dtype=complex)
            total += complex(np.sum(vals))
            count += chunk
            mags = np.abs(vals)
            last, prev = mags[-1], mags[-2]
            ratio = last / prev if prev > 0 else 0.0
            if ratio < 1:
                bound = last * ratio / (1 - ratio)
                if bound <= tol * max(abs(total), 1e-300):
                    tail += bound
                    break
            start += chunk
            if start > max_terms:
                raise NonConvergent("terms of the Z-sum do not decay; evaluate inside the strip")
    return SumResult(total, tail, count)


def _regulated_sum(term: Callable[[np.ndarray], np.ndarray], delta0: float, levels: int,
                   tol: float) -> SumResult:
    """Gaussian-damped sums at delta0, delta0/2, ... extrapolated to delta -> 0."""
    vals = []
    count = 0
    for k in range(levels):
        d = delta0 / 2 ** k
        m = int(math.ceil(math.sqrt(math.log(1 / tol) / d))) + 1
        ms = np.arange(-m, m + 1)
        vals.append(complex(np.sum(term(ms) * np.exp(-d * ms * ms.astype(float)))))
        count += ms.size
    value, err = richardson(vals)
    return SumResult(value, err, count)


@dataclass(frozen=True)
class QuotientFamily:
    """Five lifted functions psi_i on R^2 and their summation controls."""

    base: PentagonFamily
    data: AutomorphicData
    policy: str = STRIP
    tol: float = 1e-13
    max_terms: int = 4000
    delta0: float = 0.02
    levels: int = 5

    def terms(self, i: int, x: complex, y: complex) -> Callable[[np.ndarray], np.ndarray]:
        mu, data, phi = self.data.mu[i], self.data, self.base.functions[i]

        def term(ms):
            ms = np.asarray(ms)
            return phi(x, y + ms) * mu ** ms.astype(float) * data.h(x + ms, ms)
        return term

    def evaluate(self, i: int, x: complex, y: complex) -> SumResult:
        term = self.terms(i, complex(x), complex(y))
        if self.policy == STRIP:
            return _strip_sum(term, self.tol, self.max_terms)
        if self.policy == REGULATOR:
            return _regulated_sum(term, self.delta0, self.levels, 1e-16)
        raise ValueError(f"unknown policy {self.policy!r}")

    def psi(self, i: int, x, y):
        xs, ys = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
        out = np.array([self.evaluate(i, a, b).value for a, b in zip(xs.ravel(), ys.ravel())],
                       dtype=complex).reshape(xs.shape)
        return out if out.ndim else complex(out)

    def integrand(self, s: SamplePoint):
        """z-integrand of the quotient identity (z along R + i*z_offset)."""
        def f(t):
            z = np.asarray(t) + 1j * s.z_offset
            (a4, b4), (a2, b2), (a0, b0) = s.rhs_args(z)
            return self.psi(4, a4, b4) * self.psi(2, a2, b2) * self.psi(0, a0, b0)
        return f


def lift_theorem1(fam: PentagonFamily, data: AutomorphicData, policy: str = STRIP,
                  check_points: Sequence[tuple[complex, complex]] | None = None,
                  **controls) -> QuotientFamily:
    """Verify automorphicity at a few points, then return the lifted family."""
    if fam.group.kind != REALS:
        raise ValueError("the lift is implemented for families over the reals")
    if policy not in (STRIP, REGULATOR):
        raise ValueError(f"unknown policy {policy!r}")
    if check_points is None:
        check_points = [(0.21 + 0.05j, -0.13 - 0.02j), (-0.4 + 0.1j, 0.35 - 0.05j)]
    check_automorphic(fam, data, check_points)
    return QuotientFamily(fam, data, policy, **controls)


def fourier_twist(fam: PentagonFamily, i: int, x: complex, y: complex, xi: complex,
                  tol: float = 1e-13, max_terms: int = 4000) -> complex:
    """f~(x, y, xi) = sum_b xi^b phi_i(x, y + b) for a character xi of Z."""
    phi = fam.functions[i]

    def term(ms):
        ms = np.asarray(ms)
        return xi ** ms.astype(float) * phi(x, y + ms)
    return _strip_sum(term, tol, max_terms).value


def fourier_twist_defect(fam: PentagonFamily, data: AutomorphicData, i: int, x: complex,
                         y: complex, xi: complex, b: int) -> float:
    """Relative defect of f~(x + b, y, xi) = gamma_i h_y(b) f~(x, y, xi h_{-b})."""
    lhs = fourier_twist(fam, i, x + b, y, xi)
    shifted = xi * complex(data.h(-b, 1))
    rhs = data.gamma[i] * complex(data.h(y, b)) * fourier_twist(fam, i, x, y, shifted)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


# ---------------------------------------------------------------------------
# verification

def verify_quasiperiodicity(q: QuotientFamily, samples: Sequence[tuple[complex, complex]],
                            tol: float, shifts: Sequence[int] = (1,)) -> VerificationReport:
    """psi_i(x+b, y) = gamma_i h_y(b) psi_i and psi_i(x, y+b) = eps(b) mu_i^{-b} h_{-x}(b) psi_i."""
    data = q.data
    rep = VerificationReport("automorphic-quasiperiodicity", {"family": q.base.name,
                                                               "policy": q.policy}, tol)
    for i in range(5):
        for x, y in samples:
            base = None
            for b in shifts:
                for kind in ("x", "y"):
                    inputs = {"i": i, "x": complex(x), "y": complex(y), "b": b, "shift": kind}
                    try:
                        if base is None:
                            base = q.evaluate(i, x, y).value
                        if kind == "x":
                            lhs = q.evaluate(i, x + b, y).value
                            factor = data.gamma[i] * complex(data.h(y, b))
                        else:
                            lhs = q.evaluate(i, x, y + b).value
                            factor = (complex(data.eps(b)) * data.mu[i] ** (-b)
                                      * complex(data.h(-x, b)))
                        rep.points.append(PointRecord.compare(inputs, lhs, factor * base))
                    except BetaPentaError as exc:
                        rep.points.append(PointRecord.failed(inputs, exc))
    return rep


def quotient_samples(rng: np.random.Generator, n: int, hbar: float) -> list[SamplePoint]:
    """Im x = Im u = c/2, Im y = Im v = -c/5, z on [0, 1) - i c/10 with c = 1/(2 sqrt(hbar))."""
    c = 0.5 / math.sqrt(hbar)
    out = []
    for _ in range(n):
        xr, yr, ur, vr = rng.uniform(-0.5, 0.5, 4)
        out.append(SamplePoint(complex(xr, 0.5 * c), complex(yr, -0.2 * c),
                               complex(ur, 0.5 * c), complex(vr, -0.2 * c), -0.1 * c))
    return out


def periodicity_defect(q: QuotientFamily, s: SamplePoint, probes: Sequence[float] = (0.0, 0.3),
                       ) -> float:
    f = q.integrand(s)
    worst = 0.0
    for t in probes:
        a, b = complex(f(np.array([t]))[0]), complex(f(np.array([t + 1.0]))[0])
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    return worst


def verify_eq11(q: QuotientFamily, samples: Sequence[SamplePoint], tol: float,
                quad_tol: float = 1e-9, periodicity_tol: float | None = None,
                ) -> VerificationReport:
    """psi_1(x,y) psi_3(u,v) = int_0^1 psi_4(u+y, v-z) psi_2(x+y+u+v-z, z) psi_0(x+v, y-z) dz.

    Each sample also records the periodicity of the integrand; a point fails
    if that defect exceeds ``periodicity_tol`` (defaults to ``tol``).
    """
    ptol = tol if periodicity_tol is None else periodicity_tol
    rep = VerificationReport("automorphic-quotient-pentagon",
                             {"family": q.base.name, "policy": q.policy}, tol)
    for s in samples:
        inputs = s.as_dict()
        try:
            lhs = q.evaluate(1, s.x, s.y).value * q.evaluate(3, s.u, s.v).value
            r = integrate_line(q.integrand(s), 0.0, 1.0,
                               tol=max(quad_tol * abs(lhs), 1e-15))
            per = periodicity_defect(q, s)
            inputs["periodicity_defect"] = per
            rec = PointRecord.compare(inputs, lhs, r.value, r.err_estimate)
            if per > ptol:
                rec.error = f"AutomorphicityViolation: integrand period defect {per:.3e}"
            rep.points.append(rec)
        except BetaPentaError as exc:
            rep.points.append(PointRecord.failed(inputs, exc))
    return rep
