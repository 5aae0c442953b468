"""Locally compact abelian groups used as test palette.

Four kinds are supported: the reals, finite cyclic groups, the integers and
the circle R/Z.  Group elements are plain numbers (``int`` for cyclic groups
and the integers, ``float``/``complex`` for the reals and the circle); the
group law is written additively.  Haar measure normalisation lives in the
:class:`Group` value so that duals are always Plancherel-consistent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, NonConvergent, NotIntegrable
from .quad import integrate_2d, integrate_line

REALS = "reals"
CYCLIC = "cyclic"
INTEGERS = "integers"
CIRCLE = "circle"
_KINDS = (REALS, CYCLIC, INTEGERS, CIRCLE)


@dataclass(frozen=True)
class Group:
    kind: str
    n: int | None = None
    measure_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if not self.measure_scale > 0:
            raise ValueError("measure_scale must be positive")
        if self.kind == CYCLIC:
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise ValueError("cyclic group needs N >= 1")
        elif self.n is not None:
            raise ValueError(f"{self.kind} takes no order")

    @property
    def is_finite(self) -> bool:
        return self.kind == CYCLIC

    def __str__(self):
        base = {REALS: "r", INTEGERS: "z", CIRCLE: "t"}.get(self.kind) or f"zn:{self.n}"
        if self.measure_scale != 1.0:
            base += f":scale={self.measure_scale:g}"
        return base

    # group law ----------------------------------------------------------
    def reduce(self, x):
        if self.kind == CYCLIC:
            return np.mod(x, self.n)
        if self.kind == CIRCLE:
            return np.mod(x, 1.0)
        return x

    def add(self, x, y):
        return self.reduce(x + y)

    def neg(self, x):
        return self.reduce(-x)

    def elements(self) -> np.ndarray:
        if self.kind != CYCLIC:
            raise ValueError("only finite groups can be enumerated")
        return np.arange(self.n)

    def point_weight(self) -> float:
        """Haar mass of a single point (finite and discrete groups)."""
        if self.kind in (CYCLIC, INTEGERS):
            return self.measure_scale
        raise ValueError(f"{self.kind} has no atoms")


def parse_group(spec: str) -> Group:
    """Parse the CLI form ``r``, ``zn:<N>``, ``z``, ``t`` with ``:scale=<s>``."""
    m = re.fullmatch(r"\s*(r|z|t|zn:(-?\d+))(?::scale=([0-9.eE+-]+))?\s*", spec)
    if not m:
        raise ConfigError(f"bad group spec {spec!r}")
    scale = float(m.group(3)) if m.group(3) else 1.0
    try:
        if m.group(2) is not None:
            return Group(CYCLIC, int(m.group(2)), scale)
        kind = {"r": REALS, "z": INTEGERS, "t": CIRCLE}[m.group(1)]
        return Group(kind, None, scale)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def dual(g: Group) -> Group:
    """Pontryagin dual carrying the Plancherel-consistent dual measure."""
    if g.kind == CYCLIC:
        return Group(CYCLIC, g.n, 1.0 / (g.n * g.measure_scale))
    if g.kind == REALS:
        return Group(REALS, None, 1.0 / g.measure_scale)
    if g.kind == INTEGERS:
        return Group(CIRCLE, None, 1.0 / g.measure_scale)
    return Group(INTEGERS, None, 1.0 / g.measure_scale)


@dataclass(frozen=True)
class Character:
    """Character of ``group`` labelled by an element of the dual group."""

    group: Group
    parameter: float

    def __call__(self, x):
        g = self.group
        if g.kind == CYCLIC:
            return np.exp(2j * np.pi * ((self.parameter * np.asarray(x)) % g.n) / g.n)
        return np.exp(2j * np.pi * self.parameter * np.asarray(x))

    def __mul__(self, other: "Character") -> "Character":
        if other.group != self.group:
            raise ValueError("characters of different groups")
        return Character(self.group, dual(self.group).reduce(self.parameter + other.parameter))

    def inverse(self) -> "Character":
        return Character(self.group, dual(self.group).reduce(-self.parameter))


def pairing(g: Group, x, xi):
    """<x, xi> = xi(x) for x in g and xi in dual(g)."""
    if g.kind == CYCLIC:
        return np.exp(2j * np.pi * (np.multiply(x, xi) % g.n) / g.n)
    return np.exp(2j * np.pi * np.multiply(x, xi))


def haar_integrate(f: Callable, g: Group, tol: float = 1e-10, decay=None):
    """Integral of ``f`` against the Haar measure of ``g``.

    Exact weighted sum on cyclic groups; adaptive quadrature on the reals and
    on the circle; a decay-controlled symmetric sum on the integers.
    """
    s = g.measure_scale
    if g.kind == CYCLIC:
        return complex(np.sum(np.asarray(f(g.elements()), dtype=complex)) * s)
    if g.kind == REALS:
        return integrate_line(f, tol=tol / s, decay=decay).value * s
    if g.kind == CIRCLE:
        return integrate_line(f, 0.0, 1.0, tol=tol / s).value * s
    if not decay:
        raise NonConvergent("sum over Z needs a decay rate")
    rate = min(decay) if not np.isscalar(decay) else decay
    m = int(math.ceil(math.log(10 / tol) / rate)) + 1
    ks = np.arange(-m, m + 1)
    return complex(np.sum(np.asarray(f(ks), dtype=complex)) * s)


def fourier_2d_finite(values: np.ndarray, g: Group) -> np.ndarray:
    """Exact transform hat f(xi, eta) = sum xi(y) conj(eta(x)) f(x, y) w^2.

    ``values[x, y]`` tabulates f on the cyclic group ``g``; the result is
    tabulated on the dual, indexed ``[xi, eta]``.
    """
    n = g.n
    w = g.measure_scale
    # sum_x e^{-2 pi i eta x / n} sum_y e^{2 pi i xi y / n} f[x, y]
    inner = np.fft.ifft(values, axis=1) * n          # [x, xi]
    outer = np.fft.fft(inner, axis=0)                # [eta, xi]
    return outer.T * w * w


def fourier_family(fam, *, tol: float = 1e-6, offsets: tuple[float, float] = (0.0, 0.0),
                   decay: tuple[float, float] | None = None):
    """hat phi_j(xi, eta) = int xi(y) eta(x)^{-1} phi_j(x, y) dx dy over the dual group.

    Cyclic groups use an exact double DFT.  Over the reals the double
    integral runs along (R + i a) x (R + i b) with ``offsets = (a, b)``;
    ``decay`` gives the exponential decay rates in x and y, which the caller
    must supply (this is where any regularisation enters).
    """
    from .pentagon import PentagonFamily, _table_family, tabulate

    if fam.distributional:
        raise NotIntegrable(f"{fam.name} is declared distributional")
    g = fam.group
    name = f"fourier({fam.name})"
    if g.kind == CYCLIC:
        tables = np.array([fourier_2d_finite(t, g) for t in tabulate(fam)])
        return _table_family(dual(g), tables, "transformed", name)
    if g.kind != REALS:
        raise ValueError(f"fourier_family supports cyclic groups and the reals, not {g}")
    if decay is None or min(decay) <= 0:
        raise NonConvergent("fourier_family over the reals needs positive decay rates")
    a, b = offsets
    s = g.measure_scale

    def make(j):
        def one(xi: complex, eta: complex) -> complex:
            def f(xs, ys):
                x, y = xs + 1j * a, ys + 1j * b
                return np.exp(2j * np.pi * (xi * y - eta * x)) * fam(j, x, y)
            r = integrate_2d(f, (-math.inf, math.inf), (-math.inf, math.inf), tol=tol,
                             xdecay=decay[0], ydecay=decay[1])
            return r.value * s * s

        def phi(xi, eta):
            xs, ys = np.broadcast_arrays(np.asarray(xi, dtype=complex),
                                         np.asarray(eta, dtype=complex))
            out = np.array([one(complex(p), complex(q)) for p, q in zip(xs.ravel(), ys.ravel())],
                           dtype=complex).reshape(xs.shape)
            return out if out.ndim else complex(out)
        return phi

    return PentagonFamily(dual(g), tuple(make(j) for j in range(5)), "transformed", name)
