"""Functional calculus f(T) by contour quadrature, Cayley regularization,
and an eigendecomposition oracle.

calc_contour realizes the absolutely convergent integral

    f(T) = (1/(2 pi i)) \\int f(z) R(z, T) dz

over the Stolz boundary contour of type theta, valid when the spectrum
sits strictly inside and f(z)/(1-z) is integrable along the contour.
Functions without that decay (constants, monomials) go through
calc_regularized, which computes (e f)(T) for the Cayley regularizer
e(z) = (1-z)/(1+z) and multiplies by e(T)^(-1) = (I+T)(I-T)^(-1).
calc_eigen_oracle is the independent witness for diagonalizable inputs.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _rng, basis, diagnostics, holo, numkernel, stolz
from .errors import (
    IllConditioned,
    NoConvergence,
    NotAdmissible,
    NotRegularizable,
    SpectrumOutsideContour,
)
from .numkernel import Operator, operator_norm

_EIGVEC_COND_CAP = 1e6
_REGULARITY_FLOOR = 1e-10


@dataclass(frozen=True)
class CalcResult:
    """f(T) with provenance and a refinement-differenced error estimate."""

    value: Operator
    method: str
    quad_error_est: float
    contour_theta: float


def default_theta(T, nu, vertex_tol=1e-9):
    """Contour type strictly between the spectral Stolz type and nu.

    Geometric mean of the two, with the spectral type floored just above
    1 so operators with spectrum on the real segment still get a valid
    contour.
    """
    omega = diagnostics.stolz_type_of_spectrum(T, vertex_tol)
    omega_eff = max(omega, 1.0 + 1e-6)
    if omega_eff >= nu:
        raise SpectrumOutsideContour(
            f"spectral Stolz type {omega:.3g} is not below nu={nu}"
        )
    return math.sqrt(omega_eff * nu)


def _check_spectrum_inside(T, theta):
    omega = diagnostics.stolz_type_of_spectrum(T)
    if not omega < theta:
        raise SpectrumOutsideContour(
            f"spectral Stolz type {omega:.4g} not inside contour type {theta} "
            "(an eigenvalue at the vertex z=1 needs the ergodic splitting first)"
        )


def calc_contour(T, f, theta, tol=1e-9, max_refinements=6, threads=1, check=True):
    """f(T) by contour quadrature; refines panels until stable within tol.

    Preconditions enforced: the spectral Stolz type of T must be < theta
    (eigenvalues at the vertex are not allowed; split them off first),
    and f(z)/(1-z) must be integrable along the contour.
    """
    results = calc_contour_multi(T, [f], theta, tol=tol, max_refinements=max_refinements,
                                 threads=threads, check=check)
    return results[0]


def calc_contour_multi(T, fs, theta, tol=1e-9, max_refinements=6, threads=1, check=True):
    """calc_contour for several functions sharing the resolvent solves.

    One LU factorization per contour node serves every function, which
    is the dominant cost for families of test functions.
    """
    if check:
        _check_spectrum_inside(T, theta)
    contour = stolz.cached_contour(theta, min(tol, 1e-8))
    if check:
        for f in fs:
            cert = holo.admissible(f, contour)
            if not cert.integrable:
                raise NotAdmissible(
                    f"{getattr(f, 'label', 'f')}(z)/(1-z) not integrable on the "
                    f"contour ({cert.diagnostic})"
                )
    prev = _multi_node_sums(T, fs, contour, threads)
    for _ in range(max_refinements):
        contour = stolz.refine(contour)
        cur = _multi_node_sums(T, fs, contour, threads)
        diffs = [operator_norm(Operator(c - p, T.space_p)) for c, p in zip(cur, prev)]
        if max(diffs) <= tol:
            return [
                CalcResult(Operator(c, T.space_p), "contour", d, theta)
                for c, d in zip(cur, diffs)
            ]
        prev = cur
    raise NoConvergence(f"contour quadrature did not stabilize within {tol}")


_NODE_CHUNK = 128


def _multi_node_sums(T, fs, contour, threads=1):
    """Per-function quadrature sums with one resolvent solve per node.

    Nodes are processed in fixed-size chunks; the per-chunk reduction is
    a tensordot in node order, so results are independent of the thread
    count used to fill the chunk.
    """
    zs = contour.points
    base = contour.weights * contour.derivs / (2j * math.pi)
    coeffs = np.stack([base * np.asarray(f(zs), dtype=complex) for f in fs])
    n = T.dim
    acc = np.zeros((len(fs), n * n), dtype=complex)

    def resolvent_at(j):
        return numkernel.resolvent_matrix(T, zs[j])

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        pool = ThreadPoolExecutor(max_workers=threads)
    else:
        pool = None
    try:
        with numkernel.single_thread_blas():
            flat = np.empty((_NODE_CHUNK, n * n), dtype=complex)
            for start in range(0, zs.size, _NODE_CHUNK):
                stop = min(start + _NODE_CHUNK, zs.size)
                idx = range(start, stop)
                if pool is not None:
                    blocks = pool.map(resolvent_at, idx)
                else:
                    blocks = (resolvent_at(j) for j in idx)
                for offset, R in enumerate(blocks):
                    flat[offset] = R.reshape(-1)
                # one GEMM per chunk covers every function at once
                acc += coeffs[:, start:stop] @ flat[: stop - start]
    finally:
        if pool is not None:
            pool.shutdown()
    return [acc[i].reshape(n, n) for i in range(len(fs))]


def calc_regularized(T, f, theta, tol=1e-9, threads=1):
    """f(T) = e(T)^(-1) (e f)(T) with the Cayley regularizer.

    Requires (I - T) injective (smallest singular value above 1e-10) and
    (I + T) invertible; works for every bounded f since e f always has
    the (1-z) decay the contour needs.
    """
    return calc_regularized_multi(T, [f], theta, tol=tol, threads=threads)[0]


def calc_regularized_multi(T, fs, theta, tol=1e-9, threads=1):
    """calc_regularized for several functions sharing the resolvent solves."""
    n = T.dim
    I = np.eye(n, dtype=complex)
    smin_minus = float(scipy.linalg.svdvals(I - T.entries)[-1])
    if smin_minus <= _REGULARITY_FLOOR:
        raise NotRegularizable(
            f"I - T numerically singular (smallest singular value {smin_minus:.2e})"
        )
    smin_plus = float(scipy.linalg.svdvals(I + T.entries)[-1])
    if smin_plus <= _REGULARITY_FLOOR:
        raise NotRegularizable("I + T numerically singular")
    e = holo.cayley()
    inners = calc_contour_multi(T, [e * f for f in fs], theta, tol=tol,
                                threads=threads, check=True)
    out = []
    for inner in inners:
        # e(T)^(-1) = (I+T)(I-T)^(-1), applied on the left
        Y = scipy.linalg.solve(I - T.entries, inner.value.entries)
        val = (I + T.entries) @ Y
        out.append(CalcResult(Operator(val, T.space_p), "regularized",
                              inner.quad_error_est, theta))
    return out


def calc_eigen_oracle(T, f):
    """V diag(f(lambda_j)) V^(-1) for diagonalizable T.

    The independent cross-check for the contour paths; refuses inputs
    whose eigenvector condition exceeds 1e6.
    """
    vals, vecs, cond = numkernel.eigensystem(T)
    if cond > _EIGVEC_COND_CAP:
        raise IllConditioned(f"eigenvector condition {cond:.2e} exceeds {_EIGVEC_COND_CAP:.0e}")
    fv = np.asarray(f(vals), dtype=complex)
    val = vecs @ (fv[:, None] * np.linalg.inv(vecs))
    return CalcResult(Operator(val, T.space_p), "eigen_oracle", 0.0, math.nan)


def cayley_of(T):
    """e(T) = (I-T)(I+T)^(-1) computed directly."""
    I = np.eye(T.dim, dtype=complex)
    return Operator((I - T.entries) @ np.linalg.inv(I + T.entries), T.space_p)


def hinf_test_family(budget, seed=0, sup_domain=None):
    """Test functions for the calculus-constant probe.

    Monomials z^n for n <= budget, random degree-<=32 polynomials
    normalized to unit boundary sup, the discrete-derivative functions
    k (1-z) z^(k-1), and the closed-form basis pairing functions.
    """
    fams = []
    for nn in range(0, budget + 1):
        fams.append(holo.monomial(nn))
    rng = _rng.stream(seed, "hinf-family")
    dom = sup_domain or stolz.StolzDomain(2.0)
    for i in range(max(budget // 2, 4)):
        deg = int(rng.integers(4, 33))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        fpoly = holo.polynomial(coeffs, label=f"randpoly{i}")
        scale = holo.sup_norm(fpoly, dom)
        fams.append(holo.polynomial(coeffs / scale, label=f"randpoly{i}"))
    for k in range(1, budget + 1):
        c = np.zeros(k + 1, dtype=complex)
        c[k - 1] = k
        c[k] = -k
        fams.append(holo.polynomial(c, label=f"dd{k}"))  # k z^(k-1) (1-z)
    for n in range(1, min(budget, 7) + 1):
        fams.append(_pairing_fn(n))
    return fams


def _pairing_fn(n):
    rho, c = basis._WINDOW_PATTERN[(n - 1) % 5]
    # sqrt(n) (1-z) z^(n-1) (1 + rho z + ... + rho^(c-1) z^(c-1)) as a polynomial
    geom = np.array([rho ** l for l in range(c)], dtype=complex)
    shifted = np.zeros(n, dtype=complex)
    shifted[-1] = math.sqrt(n)
    poly = np.polynomial.polynomial.polymul(shifted, geom)
    poly = np.polynomial.polynomial.polymul(poly, np.array([1.0, -1.0], dtype=complex))
    return holo.polynomial(poly, label=f"pairing{n}")


def hinf_constant_estimate(T, nu, families=None, budget=12, tol=1e-9, seed=0, threads=1):
    """Lower estimate of sup ||f(T)|| / ||f||_inf over the test family.

    Every member goes through the regularized path so the family may mix
    admissible and non-admissible functions.  The sup norms are boundary
    grid estimates on Stolz_nu; the quotient is therefore itself an
    estimate, reported without any boundedness claim.
    """
    dom = stolz.StolzDomain(nu)
    theta = default_theta(T, nu)
    fams = families if families is not None else hinf_test_family(budget, seed, dom)
    sups = [holo.sup_norm(f, dom, certify=False) for f in fams]
    live = [(f, s) for f, s in zip(fams, sups) if s > 0.0]
    results = calc_regularized_multi(T, [f for f, _ in live], theta, tol=tol, threads=threads)
    best = 0.0
    for (f, sup), res in zip(live, results):
        best = max(best, operator_norm(res.value) / sup)
    return best
