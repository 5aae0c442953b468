"""Adaptive complex quadrature on real lines, polyline contours and rectangles.

The engine is a globally adaptive 15-point Gauss-Kronrod rule.  Each interval
carries the embedded difference ``|K15 - G7|`` as its error estimate and every
round bisects, in a single vectorised call, all intervals whose error exceeds
their share of the target.

Integrands must accept a 1-D ``numpy`` array and return an array of the same
shape (complex or real).  Infinite ends need a declared exponential decay rate;
the window is truncated where the observed envelope bounds the tail by a tenth
of the tolerance.  Nothing is ever truncated on the strength of a guess: a tail
that fails to shrink raises :class:`NonConvergent`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergent

# Kronrod abscissae on [0, 1] (symmetric rule); odd indices are the Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full 15-node pattern on [-1, 1] and the matching weights.
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    _GW[_i] = _w
    _GW[14 - _i] = _w
_GW[7] = _WG[3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    evaluations: int
    window: tuple[float, float] = field(default=(0.0, 0.0), compare=False)

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be non-negative")

    def __add__(self, other: "QuadResult") -> "QuadResult":
        lo = min(self.window[0], other.window[0])
        hi = max(self.window[1], other.window[1])
        return QuadResult(self.value + other.value,
                          self.err_estimate + other.err_estimate,
                          self.evaluations + other.evaluations, (lo, hi))

    def scaled(self, factor: complex) -> "QuadResult":
        return QuadResult(self.value * factor, self.err_estimate * abs(factor),
                          self.evaluations, self.window)


@dataclass(frozen=True)
class Contour:
    """Polyline in the complex plane, optionally with rays to infinity.

    ``start_direction`` / ``end_direction`` are outward unit directions of the
    rays attached to the first / last vertex; the matching ``*_decay`` rates
    (strictly positive) are the caller's promise that the integrand decays like
    ``exp(-rate * t)`` along the ray.
    """

    vertices: tuple[complex, ...]
    start_direction: complex | None = None
    end_direction: complex | None = None
    start_decay: float | None = None
    end_decay: float | None = None

    def __post_init__(self):
        nseg = len(self.vertices) - 1
        nseg += self.start_direction is not None
        nseg += self.end_direction is not None
        if len(self.vertices) == 0 or nseg < 1:
            raise ValueError("contour needs at least one segment")
        for d, r in ((self.start_direction, self.start_decay),
                     (self.end_direction, self.end_decay)):
            if d is not None and (r is None or not r > 0):
                raise ValueError("infinite contour ends need a positive decay rate")

    @classmethod
    def segment(cls, a: complex, b: complex) -> "Contour":
        return cls((complex(a), complex(b)))

    @classmethod
    def horizontal(cls, offset: float, decay: float | tuple[float, float]) -> "Contour":
        """The line R + i*offset traversed left to right."""
        left, right = _pair(decay)
        return cls((complex(0.0, offset),), -1.0 + 0j, 1.0 + 0j, left, right)

    @classmethod
    def through(cls, points: Sequence[complex], decay: float | tuple[float, float]) -> "Contour":
        """Horizontal rays glued to a finite polyline (left to right)."""
        left, right = _pair(decay)
        return cls(tuple(complex(p) for p in points), -1.0 + 0j, 1.0 + 0j, left, right)

    def pieces(self):
        """Yield (kind, start, direction_or_end, decay) for each piece in order."""
        v = self.vertices
        if self.start_direction is not None:
            yield "ray_in", v[0], self.start_direction, self.start_decay
        for p, q in zip(v[:-1], v[1:]):
            yield "segment", p, q, None
        if self.end_direction is not None:
            yield "ray_out", v[-1], self.end_direction, self.end_decay


def _pair(decay):
    if decay is None:
        return None, None
    if np.isscalar(decay):
        return float(decay), float(decay)
    left, right = decay
    return (None if left is None else float(left),
            None if right is None else float(right))


def _evaluate(f, t):
    try:
        y = np.asarray(f(t), dtype=complex)
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"integrand failed: {exc}") from exc
    if y.shape != t.shape:
        y = np.broadcast_to(y, t.shape).astype(complex)
    if not np.all(np.isfinite(y)):
        bad = t[~np.isfinite(y)][0]
        raise DomainError(f"integrand not finite at t={bad!r}")
    return y


def _gk(f, a, b):
    """Apply the 15-point pair to every interval [a_k, b_k] in one call."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    t = (c[:, None] + h[:, None] * _NODES[None, :])
    y = _evaluate(f, t.ravel()).reshape(t.shape)
    k = h * (y @ _KW)
    g = h * (y @ _GW)
    resabs = np.abs(h) * (np.abs(y) @ _KW)
    err = np.maximum(np.abs(k - g), 50 * _EPS * resabs)
    return k, err


def _adapt(f, edges, tol, rtol, max_intervals):
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1].copy(), edges[1:].copy()
    vals, errs = _gk(f, a, b)
    nevals = 15 * len(a)
    width = float(np.sum(b - a))
    while True:
        total = float(np.sum(errs))
        value = complex(np.sum(vals))
        target = max(tol, rtol * abs(value))
        if total <= target:
            return value, total, nevals
        share = target * (b - a) / width
        bad = errs > share
        splittable = (b - a) > 64 * _EPS * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        bad &= splittable
        if not np.any(bad):
            cand = np.where(splittable, errs, -1.0)
            k = int(np.argmax(cand))
            if cand[k] < 0:
                raise NonConvergent(f"error estimate stalled at {total:.3g} > {target:.3g}")
            bad[k] = True
        if len(a) + int(np.sum(bad)) > max_intervals:
            raise NonConvergent(
                f"interval budget exhausted; error {total:.3g} > {target:.3g}")
        ab, bb = a[bad], b[bad]
        mid = 0.5 * (ab + bb)
        na = np.concatenate([ab, mid])
        nb = np.concatenate([mid, bb])
        nv, ne = _gk(f, na, nb)
        nevals += 15 * len(na)
        keep = ~bad
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def _tail_end(f, anchor, sign, rate, tol, cell, max_cells=1 << 16):
    """Grow the window from ``anchor`` in direction ``sign`` in whole cells.

    Returns (number_of_cells, tail_bound, evaluations).  The tail beyond the
    window is bounded by ``M / rate`` where M is the largest modulus probed on
    the next few e-folding lengths.
    """
    n = 4
    evals = 0
    probe = np.linspace(0.0, 4.0 / rate, 17)
    last = math.inf
    stalls = 0
    while n <= max_cells:
        end = anchor + sign * n * cell
        m = float(np.max(np.abs(_evaluate(f, end + sign * probe))))
        evals += probe.size
        bound = m / rate
        if bound < tol / 10:
            return n, bound, evals
        stalls = stalls + 1 if m >= last else 0
        if stalls >= 6:
            break
        last = m
        n = int(math.ceil(n * 1.5))
    raise NonConvergent("integrand tail does not decay at the declared rate")


def integrate_line(f: Callable[[np.ndarray], np.ndarray], a: float = -math.inf,
                   b: float = math.inf, *, tol: float = 1e-10, rtol: float = 0.0,
                   decay: float | tuple[float, float] | None = None,
                   breakpoints: Sequence[float] = (), center: float = 0.0,
                   cell: float | None = None, max_intervals: int = 40000) -> QuadResult:
    """Integrate ``f`` over ``[a, b]`` (either end may be infinite).

    ``decay`` gives the exponential decay rate at the infinite end(s); a
    missing rate for an infinite end is rejected.  ``center`` anchors the
    window when both ends are infinite.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if a == b:
        return QuadResult(0j, 0.0, 1, (float(a), float(a)))
    if a > b:
        r = integrate_line(f, b, a, tol=tol, rtol=rtol, decay=_swap(decay),
                           breakpoints=breakpoints, center=center, cell=cell,
                           max_intervals=max_intervals)
        return r.scaled(-1)
    left, right = _pair(decay)
    lo_inf, hi_inf = math.isinf(a), math.isinf(b)
    if lo_inf and not (left and left > 0):
        raise NonConvergent("infinite lower limit without a positive decay rate")
    if hi_inf and not (right and right > 0):
        raise NonConvergent("infinite upper limit without a positive decay rate")

    inner = sorted(float(p) for p in breakpoints if a < p < b)
    evals = 0
    tail = 0.0
    finite = [p for p in (a, b) if not math.isinf(p)] + inner
    if lo_inf and hi_inf and not finite:
        finite = [float(center)]
    lo_anchor, hi_anchor = min(finite), max(finite)
    rates = [r for r, inf in ((left, lo_inf), (right, hi_inf)) if inf]
    if cell is None:
        cell = min(1.0, 1.0 / max(rates)) if rates else 1.0
    ttol = tol / (2 if lo_inf and hi_inf else 1)

    edges = []
    if lo_inf:
        n, bound, e = _tail_end(f, lo_anchor, -1.0, left, ttol, cell)
        edges.extend(lo_anchor - cell * np.arange(n, 0, -1))
        tail += bound
        evals += e
    edges.extend(sorted(set(finite)))
    if hi_inf:
        n, bound, e = _tail_end(f, hi_anchor, 1.0, right, ttol, cell)
        edges.extend(hi_anchor + cell * np.arange(1, n + 1))
        tail += bound
        evals += e
    if len(edges) < 2:
        edges = [a, b]
    edges = np.unique(np.asarray(edges, dtype=float))
    value, err, e = _adapt(f, edges, max(tol - tail, tol / 2), rtol, max_intervals)
    return QuadResult(value, err + tail, evals + e, (float(edges[0]), float(edges[-1])))


def _swap(decay):
    left, right = _pair(decay)
    return None if decay is None else (right, left)


def integrate_contour(f: Callable[[np.ndarray], np.ndarray], c: Contour, *,
                      tol: float = 1e-10, rtol: float = 0.0,
                      max_intervals: int = 40000) -> QuadResult:
    """Integrate an analytic ``f(z)`` along ``c``; returns the sum over pieces."""
    pieces = list(c.pieces())
    ptol = tol / len(pieces)
    total = QuadResult(0j, 0.0, 0, (0.0, 0.0))
    for kind, p, q, rate in pieces:
        if kind == "segment":
            d = q - p
            if d == 0:
                continue
            r = integrate_line(lambda t, p=p, d=d: f(p + d * t) * d, 0.0, 1.0,
                               tol=ptol, rtol=rtol, max_intervals=max_intervals)
        else:
            d = q / abs(q)
            sgn = 1.0 if kind == "ray_out" else -1.0
            r = integrate_line(lambda t, p=p, d=d: f(p + d * t) * d, 0.0, math.inf,
                               tol=ptol, rtol=rtol, decay=(None, rate),
                               max_intervals=max_intervals).scaled(sgn)
        total = total + r
    return total


def integrate_2d(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 xwin: tuple[float, float], ywin: tuple[float, float], *,
                 tol: float = 1e-8, xdecay=None, ydecay=None, xcenter: float = 0.0,
                 ycenter: float = 0.0, max_intervals: int = 20000) -> QuadResult:
    """Iterated integral  int dx int dy f(x, y); errors compose additively."""
    inner_tol = tol / 4
    worst = [0.0]
    count = [0]
    span = [1.0]

    def inner(xs):
        out = np.empty(xs.shape, dtype=complex)
        for k, x in enumerate(xs):
            r = integrate_line(lambda y, x=x: f(np.full_like(y, x), y), *ywin,
                               tol=inner_tol, decay=ydecay, center=ycenter,
                               max_intervals=max_intervals)
            out[k] = r.value
            worst[0] = max(worst[0], r.err_estimate)
            count[0] += r.evaluations
        return out

    outer = integrate_line(inner, *xwin, tol=tol / 2, decay=xdecay, center=xcenter,
                           max_intervals=max_intervals)
    span[0] = outer.window[1] - outer.window[0]
    return QuadResult(outer.value, outer.err_estimate + worst[0] * span[0],
                      count[0] + outer.evaluations, outer.window)
