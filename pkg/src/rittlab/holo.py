"""Scalar holomorphic functions on Stolz domains.

A :class:`HoloFn` wraps one of a handful of evaluatable kinds
(polynomial, rational, monomial power, the Cayley regularizer, or an
opaque callable).  Rational kinds can certify the absence of poles on
the closure of a target domain; opaque evaluators carry no certificate
and are always probed numerically.
"""

from dataclasses import dataclass

import numpy as np

from . import stolz
from .errors import PoleOnDomain

_POLE_DEGREE_CAP = 64


class HoloFn:
    """Evaluatable holomorphic function with optional exact derivative.

    Construct through the module helpers: polynomial(), rational(),
    monomial(), cayley(), opaque().  Coefficients are ascending-power.
    """

    def __init__(self, kind, num, den=None, evaluator=None, label=None):
        self.kind = kind
        self.num = None if num is None else np.asarray(num, dtype=complex)
        self.den = None if den is None else np.asarray(den, dtype=complex)
        self._evaluator = evaluator
        self.label = label or kind

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self._evaluator is not None:
            out = self._evaluator(z)
            return np.asarray(out, dtype=complex)
        vals = np.polynomial.polynomial.polyval(z, self.num)
        if self.den is not None:
            vals = vals / np.polynomial.polynomial.polyval(z, self.den)
        return vals

    def deriv(self, z):
        """Exact derivative where the kind permits; opaque kinds raise."""
        if self._evaluator is not None:
            raise TypeError("opaque evaluators carry no exact derivative")
        z = np.asarray(z, dtype=complex)
        dnum = np.polynomial.polynomial.polyder(self.num)
        nv = np.polynomial.polynomial.polyval(z, self.num)
        dnv = np.polynomial.polynomial.polyval(z, dnum)
        if self.den is None:
            return dnv
        dden = np.polynomial.polynomial.polyder(self.den)
        dv = np.polynomial.polynomial.polyval(z, self.den)
        ddv = np.polynomial.polynomial.polyval(z, dden)
        return (dnv * dv - nv * ddv) / (dv * dv)

    def __mul__(self, other):
        if not isinstance(other, HoloFn):
            return NotImplemented
        if self._evaluator is not None or other._evaluator is not None:
            f, g = self, other
            return HoloFn(
                "opaque",
                None,
                evaluator=lambda z: f(z) * g(z),
                label=f"({self.label})*({other.label})",
            )
        num = np.polynomial.polynomial.polymul(self.num, other.num)
        if self.den is None and other.den is None:
            return HoloFn("polynomial", num, label=f"({self.label})*({other.label})")
        den = np.array([1.0 + 0j])
        if self.den is not None:
            den = np.polynomial.polynomial.polymul(den, self.den)
        if other.den is not None:
            den = np.polynomial.polynomial.polymul(den, other.den)
        return HoloFn("rational", num, den, label=f"({self.label})*({other.label})")

    def __repr__(self):
        return f"HoloFn({self.label})"


def polynomial(coeffs, label=None):
    return HoloFn("polynomial", np.atleast_1d(np.asarray(coeffs, dtype=complex)), label=label)


def rational(num_coeffs, den_coeffs, label=None):
    den = np.atleast_1d(np.asarray(den_coeffs, dtype=complex))
    if np.all(den == 0):
        raise ValueError("zero denominator")
    return HoloFn("rational", np.atleast_1d(np.asarray(num_coeffs, dtype=complex)), den, label=label)


def monomial(n, label=None):
    if n < 0:
        raise ValueError("monomial power must be nonnegative")
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return HoloFn("monomial_power", c, label=label or f"z^{n}")


def cayley():
    """e(z) = (1-z)/(1+z), the universal regularizer."""
    return HoloFn("cayley", np.array([1.0, -1.0], dtype=complex), np.array([1.0, 1.0], dtype=complex), label="cayley")


def opaque(evaluator, label="opaque"):
    """Wrap an arbitrary thread-safe callable; no pole certificate."""
    return HoloFn("opaque", None, evaluator=evaluator, label=label)


def constant(c):
    return polynomial([c], label=f"const({c})")


def denominator_roots(f):
    if f.den is None or f.den.size <= 1:
        return np.array([], dtype=complex)
    if f.den.size - 1 > _POLE_DEGREE_CAP:
        raise ValueError(f"denominator degree exceeds root-finding cap {_POLE_DEGREE_CAP}")
    return np.polynomial.polynomial.polyroots(f.den)


def certify_pole_free(f, domain):
    """Raise PoleOnDomain if a denominator root lies in the closure of the domain.

    The closure test is |1-z| <= omega (1-|z|), which correctly includes
    the vertex z=1 and excludes everything on or outside the unit circle
    other than the vertex.  Opaque kinds cannot be certified and pass
    (they are always probed numerically downstream).
    """
    if f._evaluator is not None:
        return
    for root in denominator_roots(f):
        if abs(1.0 - root) <= domain.omega * (1.0 - abs(root)):
            raise PoleOnDomain(f"{f.label} has a pole at {root} inside Stolz_{domain.omega}")


@dataclass(frozen=True)
class AdmissibilityCert:
    """Outcome of the L^1 probe of f(z)/(1-z) along a contour.

    integrable=True means the panel-refinement increments decayed
    geometrically and the estimate moved < 5% on the last refinement.
    diagnostic records why integrability was denied ("diverging" for
    clear growth, "uncertain" otherwise).
    """

    theta: float
    integrable: bool
    l1_value: float
    diagnostic: str = ""


def sup_norm(f, domain, grid_density=512, certify=True, max_doublings=6):
    """Max of |f| over a boundary grid of the Stolz domain.

    By the maximum modulus principle the boundary suffices for functions
    holomorphic on the closure.  The grid is doubled until the max moves
    by < 1%; the result is a lower estimate of the true sup.
    """
    if certify:
        certify_pole_free(f, domain)
    density = max(int(grid_density), 8)
    prev = _boundary_max(f, domain.omega, density)
    for _ in range(max_doublings):
        density *= 2
        cur = _boundary_max(f, domain.omega, density)
        if abs(cur - prev) <= 0.01 * max(cur, 1e-300):
            return max(cur, prev)
        prev = cur
    return prev


def _boundary_max(f, omega, density):
    C = stolz.c_theta(omega)
    t = np.linspace(-C, C, density)
    z, _ = stolz.boundary_point(omega, t)
    return float(np.max(np.abs(f(z))))


def admissible(f, contour, refinements=5):
    """Estimate integral of |f(z)/(1-z)| |dz| under panel refinement.

    Admissible integrands have an algebraic endpoint singularity at the
    vertex, for which the graded panels converge geometrically: the
    refinement increments shrink by a constant factor.  A logarithmic
    divergence produces near-constant increments instead, so the test
    requires both a small last relative change and decaying increments.
    """
    cur = contour
    vals = [_l1_on_contour(f, cur)]
    for _ in range(refinements):
        cur = stolz.refine(cur)
        vals.append(_l1_on_contour(f, cur))
    increments = [abs(b - a) for a, b in zip(vals[:-1], vals[1:])]
    last = vals[-1]
    rel_change = increments[-1] / max(last, 1e-300)
    inc_ratio = increments[-1] / max(increments[-2], 1e-300)
    if vals[-1] > 2.0 * max(vals[0], 1e-300):
        return AdmissibilityCert(contour.theta, False, last, "diverging")
    if rel_change < 0.05 and (inc_ratio <= 0.7 or increments[-1] <= 1e-13 * max(last, 1.0)):
        return AdmissibilityCert(contour.theta, True, last)
    return AdmissibilityCert(contour.theta, False, last, "uncertain")


def _l1_on_contour(f, contour):
    z = contour.points
    vals = np.abs(f(z) / (1.0 - z)) * np.abs(contour.derivs)
    return float(np.sum(contour.weights * vals))
