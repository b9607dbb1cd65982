"""Stolz domain geometry and quadrature contours along their boundaries.

A Stolz domain of type omega > 1 is the lens

    { z in the open unit disc : |1 - z| / (1 - |z|) < omega },

with vertex at z = 1 and opening angle 2 arccos(1/omega).  Its boundary
is the curve where the membership quotient equals omega, parameterized
for t in [-C, C], C = arccos(1/omega), by

    gamma(t) = 1 - r(t) e^{it},     r(t) = (2 w / (w^2 - 1)) (w cos t - 1),

which traverses the boundary counterclockwise.  Along the curve

    |gamma(t)|  = 1 - r(t)/w = (1 + w^2 - 2 w cos t) / (w^2 - 1),
    |gamma'(t)| = (2 w / sqrt(w^2 - 1)) |gamma(t)|^(1/2).

Quadrature contours are composite Gauss-Legendre panels with geometric
grading toward the endpoints t = +-C, where admissible integrands of the
form f(z)/(1-z) may blow up like a negative fractional power of (1-z).
Membership tests use strict inequalities with no tolerance; callers that
need closures must widen omega explicitly.
"""

import csv
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, OutOfRange

DEFAULT_GL_ORDER = 12
_BASE_GRADING_LEVELS = 8
_MAX_REFINEMENTS = 20


@dataclass(frozen=True)
class StolzDomain:
    """Stolz lens of type omega > 1."""

    omega: float

    def __post_init__(self):
        if not self.omega > 1.0:
            raise ValueError(f"Stolz type must satisfy omega > 1, got {self.omega}")

    @property
    def half_angle(self):
        """Opening half-angle arccos(1/omega), in (0, pi/2)."""
        return math.acos(1.0 / self.omega)


def contains(domain, z):
    """Strict membership test |z| < 1 and |1-z|/(1-|z|) < omega in binary64."""
    az = abs(z)
    if az >= 1.0:
        return False
    return abs(1.0 - z) / (1.0 - az) < domain.omega


def membership_quotient(z):
    """|1-z|/(1-|z|); +inf on or outside the unit circle (except z=1 -> 0/0 -> inf)."""
    az = abs(z)
    if az >= 1.0:
        return math.inf
    return abs(1.0 - z) / (1.0 - az)


@dataclass(frozen=True)
class LegacyStolzRegion:
    """Convex hull of {1} and the closed ball B(0, r), 0 < r < 1.

    The older lens used in parts of the literature; kept for region
    containment comparisons against the sharper Stolz lens.
    """

    r: float

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"radius must lie in (0,1), got {self.r}")

    def contains(self, z):
        """Exact two-piece test: the ball, then the tangent cone from 1.

        z is in the hull iff z = (1-t) 1 + t w for some t in (0,1] and
        |w| <= r.  Minimizing |t + u|/t over t with u = z - 1 gives the
        closed-form cone test |Im u| / |u| <= r with the minimizer
        t* = -|u|^2 / Re(u) required to lie in (0, 1].
        """
        z = complex(z)
        if abs(z) <= self.r:
            return True
        u = z - 1.0
        x = u.real
        if x >= 0.0:
            return z == 1.0
        t_star = -(abs(u) ** 2) / x
        if t_star > 1.0:
            return False  # best segment endpoint is t=1, i.e. the ball test above
        return abs(u.imag) / abs(u) <= self.r


def c_theta(theta):
    """Endpoint parameter C = arccos(1/theta) of the boundary parameterization."""
    if not theta > 1.0:
        raise ValueError(f"contour type must satisfy theta > 1, got {theta}")
    return math.acos(1.0 / theta)


def radial_profile(theta, t):
    """r(t) = (2 theta/(theta^2-1)) (theta cos t - 1)."""
    t = np.asarray(t, dtype=float)
    return (2.0 * theta / (theta * theta - 1.0)) * (theta * np.cos(t) - 1.0)


def boundary_point(theta, t):
    """(gamma(t), gamma'(t)) by analytic differentiation."""
    t = np.asarray(t, dtype=float)
    r = radial_profile(theta, t)
    rp = -(2.0 * theta * theta / (theta * theta - 1.0)) * np.sin(t)
    e = np.exp(1j * t)
    return 1.0 - r * e, -(rp + 1j * r) * e


@dataclass(frozen=True)
class Contour:
    """Graded Gauss-Legendre discretization of the Stolz boundary of type theta.

    nodes/weights are the concatenated per-panel Gauss-Legendre rules in
    the parameter t; points and derivs hold gamma(t_j) and gamma'(t_j).
    grading_levels and splits record how the panel set was produced so a
    refined contour can be rebuilt deterministically.
    """

    theta: float
    c_theta: float
    panels: tuple
    nodes: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    derivs: np.ndarray
    order: int
    grading_levels: int
    splits: int

    @property
    def node_count(self):
        return self.nodes.size


def boundary(contour, t):
    """(z, dz) on the contour's curve; OutOfRange for |t| > C_theta."""
    if abs(t) > contour.c_theta * (1.0 + 1e-15):
        raise OutOfRange(f"|t|={abs(t)} exceeds C_theta={contour.c_theta}")
    z, dz = boundary_point(contour.theta, t)
    return complex(z), complex(dz)


def _breakpoints(theta, levels, splits):
    C = c_theta(theta)
    pos = [0.0] + [C * (1.0 - 2.0 ** (-j)) for j in range(1, levels + 1)] + [C]
    bps = np.array([-b for b in reversed(pos)][:-1] + pos)
    for _ in range(splits):
        mids = 0.5 * (bps[:-1] + bps[1:])
        bps = np.sort(np.concatenate([bps, mids]))
    return bps


def _assemble(theta, levels, splits, order):
    bps = _breakpoints(theta, levels, splits)
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = bps[:-1], bps[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = (half[:, None] * x[None, :] + mid[:, None]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    pts, der = boundary_point(theta, nodes)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    pts.setflags(write=False)
    der.setflags(write=False)
    return Contour(
        theta=theta,
        c_theta=c_theta(theta),
        panels=tuple(zip(a.tolist(), b.tolist())),
        nodes=nodes,
        weights=weights,
        points=pts,
        derivs=der,
        order=order,
        grading_levels=levels,
        splits=splits,
    )


def integrate_nodes(contour, values):
    """Sum_j w_j values_j with values sampled at the contour nodes.

    values may carry trailing axes (vectors, matrices); the quadrature
    axis is the first one.
    """
    v = np.asarray(values)
    return np.tensordot(contour.weights, v, axes=(0, 0))


def contour_integral(contour, f):
    """Integral of f(z) dz over the contour (counterclockwise)."""
    return complex(np.sum(contour.weights * f(contour.points) * contour.derivs))


def cauchy_probe(contour, z0):
    """Quadrature of the Cauchy integral dz/(z - z0).

    2 pi i for z0 inside, 0 outside; the deviation measures contour
    quality for poles no closer to the curve than z0.
    """
    return complex(np.sum(contour.weights * contour.derivs / (contour.points - z0)))


def arc_length(contour):
    return float(np.sum(contour.weights * np.abs(contour.derivs)))


def _probe_points(theta):
    # interior battery: center-line and off-axis points, plus points close
    # to the left cap and to the vertex, so the built contour resolves
    # poles as near to the curve as the spectra the calculus visits
    left = (1.0 - theta) / (1.0 + theta)
    span = 1.0 - left
    height = 0.35 * span
    cands = [
        0.0,
        0.5 * left,
        0.75 * left,
        left + 0.04 * span,
        1.0 - 0.03 * span,
        1.0 - 0.1 * span,
        0.4,
        0.2 + 1j * height,
        0.2 - 1j * height,
        0.5 + 0.5j * height,
        0.5 - 0.5j * height,
    ]
    return [z for z in cands if membership_quotient(z) < 0.85 * (theta - 1.0) + 1.0]


def make_contour(theta, tol, order=DEFAULT_GL_ORDER, max_refinements=_MAX_REFINEMENTS):
    """Build a contour and refine until the Cauchy probes meet tol.

    Each refinement deepens the endpoint grading by two levels and halves
    every panel, so both endpoint-singular and mid-curve structure
    converge.  Raises NoConvergence if the budget is exhausted.
    """
    if not theta > 1.0:
        raise ValueError(f"contour type must satisfy theta > 1, got {theta}")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    order = max(int(order), 8)
    probes = _probe_points(theta)
    levels, splits = _BASE_GRADING_LEVELS, 0
    for _ in range(max_refinements + 1):
        contour = _assemble(theta, levels, splits, order)
        errs = [abs(cauchy_probe(contour, z0) - 2j * math.pi) for z0 in probes]
        errs.append(abs(complex(np.sum(contour.weights * contour.derivs))))  # closed curve
        if max(errs) <= tol:
            return contour
        levels += 2
        splits += 1
    raise NoConvergence(
        f"contour refinement exhausted {max_refinements} doublings at tol={tol}"
    )


def refine(contour):
    """The next refinement level of a contour (used for error estimates)."""
    return _assemble(
        contour.theta,
        contour.grading_levels + 2,
        contour.splits + 1,
        contour.order,
    )


@functools.lru_cache(maxsize=64)
def cached_contour(theta, tol, order=DEFAULT_GL_ORDER):
    """Memoized make_contour; contours are immutable and safe to share."""
    return make_contour(theta, tol, order)


def contour_to_csv(contour, path):
    """Dump nodes as CSV: t, Re z, Im z, Re dz, Im dz, weight."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re_z", "im_z", "re_dz", "im_dz", "weight"])
        for t, z, dz, w in zip(contour.nodes, contour.points, contour.derivs, contour.weights):
            writer.writerow([repr(t), repr(z.real), repr(z.imag), repr(dz.real), repr(dz.imag), repr(w)])
