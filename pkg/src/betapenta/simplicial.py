"""The five-term identity read on the boundary of a 4-simplex.

Edges of the 4-simplex carry group elements x_jk (j < k).  Each 3-face
``d_i`` (the face omitting vertex i) gets the weight

    W(d_i, x) = phi_i(x01 + x23 - x03 - x12, x03 + x12 - x02 - x13)

evaluated on the pullback of x along the face injection.  The product over
faces 1 and 3 equals the integral over x13 of the product over faces 0, 2, 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

import numpy as np

from .errors import BetaPentaError
from .lca import CYCLIC, REALS
from .pentagon import PentagonFamily, SamplePoint, pentagon_sides, tabulate
from .quad import Contour, integrate_contour
from .report import PointRecord, VerificationReport

EDGES4 = tuple(combinations(range(5), 2))
EDGES3 = tuple(combinations(range(4), 2))
LHS_FACES = (1, 3)
RHS_FACES = (0, 2, 4)
INTEGRATION_EDGE = (1, 3)


def face_map(i: int, j: int) -> int:
    """The injection [3] -> [4] that skips the value i."""
    if not 0 <= i <= 4:
        raise ValueError("face index must lie in 0..4")
    return j if j < i else j + 1


@dataclass(frozen=True)
class EdgeLabeling:
    """Group elements on the edges of a simplex, keyed by (j, k) with j < k."""

    labels: Mapping[tuple[int, int], complex]

    def __post_init__(self):
        keys = set(self.labels)
        if keys != set(EDGES4) and keys != set(EDGES3):
            raise ValueError("a labeling covers all 10 (or 6) edges exactly once")

    def __getitem__(self, edge):
        j, k = edge
        return self.labels[(min(j, k), max(j, k))]

    def with_edge(self, edge, value) -> "EdgeLabeling":
        d = dict(self.labels)
        d[edge] = value
        return EdgeLabeling(d)

    @classmethod
    def from_values(cls, values) -> "EdgeLabeling":
        values = list(values)
        edges = EDGES4 if len(values) == 10 else EDGES3
        return cls(dict(zip(edges, values)))


def pullback(i: int, x: EdgeLabeling) -> EdgeLabeling:
    """(eps_i^* x)_jk = x_{eps_i(j) eps_i(k)} on the six edges of a 3-simplex."""
    return EdgeLabeling({(j, k): x[face_map(i, j), face_map(i, k)] for j, k in EDGES3})


def face_arguments(y: EdgeLabeling):
    """The two arguments of the tetrahedral weight."""
    a = y[0, 1] + y[2, 3] - y[0, 3] - y[1, 2]
    b = y[0, 3] + y[1, 2] - y[0, 2] - y[1, 3]
    return a, b


def weight_W(fam: PentagonFamily, i: int, y: EdgeLabeling):
    a, b = face_arguments(y)
    return fam(i, a, b)


def faces_with_edge(edge=INTEGRATION_EDGE) -> tuple[int, ...]:
    """3-faces containing ``edge``: those omitting a vertex not on it."""
    return tuple(i for i in range(5) if i not in edge)


def induced_sample(x: EdgeLabeling) -> tuple[SamplePoint, complex]:
    """(x, y, u, v) of the five-term identity and the z matching x13."""
    X = x[0, 2] + x[3, 4] - x[0, 4] - x[2, 3]
    Y = x[0, 4] + x[2, 3] - x[0, 3] - x[2, 4]
    U = x[0, 1] + x[2, 4] - x[0, 4] - x[1, 2]
    V = x[0, 4] + x[1, 2] - x[0, 2] - x[1, 4]
    Z = x[1, 3] + x[0, 4] - x[1, 4] - x[0, 3]
    return SamplePoint(X, Y, U, V), Z


def move_sides(fam: PentagonFamily, x: EdgeLabeling, quad_tol: float = 1e-10):
    """(LHS, RHS, quad error, scale) of the 2-3 move at the labeling ``x``."""
    lhs = complex(np.prod([weight_W(fam, i, pullback(i, x)) for i in LHS_FACES]))
    g = fam.group

    def integrand_at(t):
        out = np.ones(np.shape(t), dtype=complex)
        for i in RHS_FACES:
            # vectorise by building the two face arguments with x13 = t
            y = pullback(i, x.with_edge(INTEGRATION_EDGE, 0))
            a, b = face_arguments(y)
            # x13 enters face 0 as (0,2), face 2 as (1,2), face 4 as (1,3)
            da, db = _x13_coefficients(i)
            out = out * fam(i, a + da * t, b + db * t)
        return out

    if g.kind == CYCLIC:
        T = np.asarray(integrand_at(g.elements()))
        w = g.measure_scale
        tab = tabulate(fam)
        mag = max(float(np.sum(np.abs(T)) * w), float(np.abs(tab[1]).max() * np.abs(tab[3]).max()))
        return lhs, complex(np.sum(T) * w), 0.0, mag
    if g.kind == REALS:
        offset = complex(x[1, 3]).imag
        rate = 0.9 * fam.rhs_decay if fam.rhs_decay else None
        if rate is None:
            raise BetaPentaError("verify_23move over the reals needs the family's decay rate")
        r = integrate_contour(integrand_at, Contour.horizontal(offset, rate),
                              tol=max(quad_tol * abs(lhs), 1e-15))
        return lhs, r.value * g.measure_scale, r.err_estimate * g.measure_scale, 0.0
    raise ValueError(f"unsupported group {g}")


def _x13_coefficients(i: int) -> tuple[int, int]:
    """d(a, b)/d x13 of the face-i weight arguments."""
    y = pullback(i, EdgeLabeling({e: (1 if e == INTEGRATION_EDGE else 0) for e in EDGES4}))
    a, b = face_arguments(y)
    return int(a), int(b)


def verify_23move(fam: PentagonFamily, x: EdgeLabeling, tol: float,
                  quad_tol: float = 1e-10) -> VerificationReport:
    """Product of W over faces 1, 3 against the x13-integral over faces 0, 2, 4.

    The x13 entry of ``x`` only fixes the height of the integration contour
    over the reals (its real part is ignored).
    """
    rep = VerificationReport("simplicial-23move", {"family": fam.name, "group": str(fam.group)},
                             tol)
    inputs = {f"x{j}{k}": x[j, k] for j, k in EDGES4}
    try:
        lhs, rhs, qe, mag = move_sides(fam, x, quad_tol)
        rep.points.append(PointRecord.compare(inputs, lhs, rhs, qe, mag))
    except BetaPentaError as exc:
        rep.points.append(PointRecord.failed(inputs, exc))
    return rep


def reduction_defect(fam: PentagonFamily, x: EdgeLabeling) -> float:
    """|difference| between the move's sides and the identity's sides at the induced sample."""
    lhs, rhs, _, _ = move_sides(fam, x)
    s, _ = induced_sample(x)
    if fam.group.kind == REALS:
        s = SamplePoint(s.x, s.y, s.u, s.v, complex(induced_sample(x)[1]).imag)
    plhs, prhs, _, _ = pentagon_sides(fam, s)
    return max(abs(lhs - plhs), abs(rhs - prhs))


def random_labeling(rng: np.random.Generator, fam: PentagonFamily, spread: float = 0.5,
                    scale: float = 0.05, hbar: float = 0.5) -> EdgeLabeling:
    """Seeded labels; over the reals four edges carry imaginary parts so that
    the induced sample lands in the complexified pentagon recipe."""
    g = fam.group
    if g.kind == CYCLIC:
        return EdgeLabeling.from_values(int(v) for v in rng.integers(0, g.n, 10))
    vals = dict(zip(EDGES4, rng.uniform(-spread, spread, 10).astype(complex)))
    return complexify_labels(EdgeLabeling(vals), scale / np.sqrt(hbar))


def complexify_labels(x: EdgeLabeling, d: float) -> EdgeLabeling:
    """Shift Im x02 = 4d, Im x24 = 2d, Im x14 = -2d, Im x01 = 2d and put the
    x13 contour at Im -3d, giving Im X = Im U = 4d, Im Y = Im V = -2d, Im Z = -d."""
    shifts = {(0, 2): 4 * d, (2, 4): 2 * d, (1, 4): -2 * d, (0, 1): 2 * d, (1, 3): -3 * d}
    return EdgeLabeling({e: complex(complex(v).real, shifts.get(e, 0.0))
                         for e, v in x.labels.items()})
