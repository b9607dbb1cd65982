"""Operator classification: resolvent constant, power bounds, discrete
derivatives, spectral Stolz type, R-bound estimation, ergodic splitting.

The resolvent constant K is the supremum over |lambda| > 1 of
||(lambda - 1) R(lambda, T)||.  A bounded K together with spectrum in
the closed disc characterizes the operators this laboratory studies; the
equivalent two-condition form is power-boundedness sup_n ||T^n|| < inf
plus the discrete derivative condition sup_k ||k T^(k-1)(I - T)|| < inf.
All suprema here are sampled and therefore reported as lower estimates;
classification is driven by the growth trend of the samples, not by any
claim of having attained the sup.
"""

import csv
import json
import math
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np
import scipy.linalg

from . import _rng, numkernel
from .errors import EmptyFamily, NonSemisimple, SingularResolvent
from .numkernel import Operator, operator_norm

_OVERFLOW_LIMIT = 1e12


@dataclass(frozen=True)
class RBoundEstimate:
    """Monte-Carlo lower estimate of the randomized-sum bound of a family."""

    value: float
    stderr: float
    samples: int
    sign_kind: str
    family_size: int


@dataclass(frozen=True)
class DiagnosticsReport:
    ritt_constant: float
    ritt_growth_flag: bool
    power_bound: float
    power_horizon: int
    power_trend: str
    dd_bound: float
    dd_horizon: int
    dd_trend: float
    stolz_type_spec: float
    classification: str
    rbound: RBoundEstimate | None = None
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        obj = asdict(self)
        obj["stolz_type_spec"] = (
            "inf" if math.isinf(self.stolz_type_spec) else self.stolz_type_spec
        )
        return json.dumps(obj, sort_keys=True, indent=2)


def default_radii(J=20):
    """Sampling radii 1 + 2^-j approaching the unit circle from outside."""
    return 1.0 + 2.0 ** (-np.arange(1, J + 1))


def default_angles(M=64, refine_near_one=8):
    """Uniform angles plus dyadic refinement toward the vertex angle 0."""
    base = np.linspace(0.0, 2.0 * math.pi, M, endpoint=False)
    extra = np.concatenate([2.0 ** (-np.arange(1, refine_near_one + 1)) * math.pi / 4,
                            -(2.0 ** (-np.arange(1, refine_near_one + 1))) * math.pi / 4])
    return np.unique(np.concatenate([base, np.mod(extra, 2.0 * math.pi)]))


def ritt_constant(T, radii=None, angles=None, collect_grid=False):
    """Sampled lower estimate of sup over |lambda|>1 of ||(lambda-1) R(lambda,T)||.

    Returns (value, growth_flag) or (value, growth_flag, grid) with grid
    rows (lambda, norm) when collect_grid is set.  growth_flag reports
    whether the per-radius maxima keep increasing as the radii approach
    the circle, which signals divergence of the supremum.
    """
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    angles = default_angles() if angles is None else np.asarray(angles, dtype=float)
    per_radius = []
    grid = []
    with numkernel.single_thread_blas():
        for r in sorted(radii, reverse=True):
            best = 0.0
            for ang in angles:
                lam = r * complex(math.cos(ang), math.sin(ang))
                try:
                    R = numkernel.resolvent_matrix(T, lam)
                except SingularResolvent:
                    warnings.warn(f"skipping sampled lambda={lam} in the numerical spectrum")
                    continue
                nrm = operator_norm(Operator((lam - 1.0) * R, T.space_p))
                best = max(best, nrm)
                if collect_grid:
                    grid.append((lam, nrm))
            per_radius.append(best)
    value = float(max(per_radius))
    growth = _is_growing(per_radius)
    if collect_grid:
        return value, growth, grid
    return value, growth


def _is_growing(seq):
    # growing if the last quarter of the radius sweep keeps gaining > 5%
    seq = np.asarray(seq, dtype=float)
    q = max(len(seq) // 4, 1)
    head = np.max(seq[: len(seq) - q]) if len(seq) > q else seq[0]
    return bool(np.max(seq[-q:]) > 1.05 * max(head, 1e-300))


def power_bound(T, N):
    """(max_{1<=n<=N} ||T^n||, trend) by sequential products.

    trend is "bounded", "growing", or "overflow"; overflow trips when a
    norm exceeds 1e12 and later powers are not computed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    P = np.eye(T.dim, dtype=complex)
    norms = []
    with numkernel.single_thread_blas():
        for _ in range(N):
            P = P @ T.entries
            nrm = operator_norm(Operator(P, T.space_p))
            norms.append(nrm)
            if nrm > _OVERFLOW_LIMIT:
                return float(max(norms)), "overflow"
    trend = "growing" if _is_growing(norms) else "bounded"
    return float(max(norms)), trend


def dd_terms(T, K):
    """The sequence k ||T^(k-1)(I - T)|| for k = 1..K, by running products."""
    if K < 1:
        raise ValueError("K must be >= 1")
    B = np.eye(T.dim, dtype=complex) - T.entries
    out = np.empty(K)
    with numkernel.single_thread_blas():
        for k in range(1, K + 1):
            out[k - 1] = k * operator_norm(Operator(B, T.space_p))
            B = T.entries @ B
    return out


def dd_bound(T, K):
    """(max_k k ||T^(k-1)(I-T)||, log-log slope over the top decade)."""
    terms = dd_terms(T, K)
    return float(np.max(terms)), dd_trend_slope(terms)


def dd_trend_slope(terms):
    """Least-squares slope of log(term) vs log(k) over the top decade of k."""
    K = len(terms)
    lo = max(K // 10, 1)
    ks = np.arange(lo, K + 1)
    vals = np.asarray(terms[lo - 1:], dtype=float)
    mask = vals > 0
    if mask.sum() < 2:
        return 0.0
    slope = np.polyfit(np.log(ks[mask]), np.log(vals[mask]), 1)[0]
    return float(slope)


def stolz_type_of_spectrum(T, vertex_tol=1e-9):
    """Max over eigenvalues of |1-lambda|/(1-|lambda|), with vertex handling.

    Stolz lenses are open, so no inclusion can be certified while the
    spectrum touches z = 1: eigenvalues within vertex_tol of 1 (at or
    numerically indistinguishable from the vertex) make the result +inf,
    as does any eigenvalue of modulus >= 1 away from the vertex.  Split
    the eigenvalue-1 part off with ergodic_split to get the finite type
    of the remainder.
    """
    spec = numkernel.eigenvalues(T)
    worst = 0.0
    for lam in spec:
        if abs(1.0 - lam) < vertex_tol:
            return math.inf
        if abs(lam) >= 1.0 - 1e-12:
            return math.inf
        worst = max(worst, abs(1.0 - lam) / (1.0 - abs(lam)))
    return worst


def rbound_estimate(family, trials=64, vectors_per_trial=None, sign_kind="rademacher",
                    mc_samples=512, seed=0, threads=1):
    """Monte-Carlo maximization of the randomized-sum quotient of a family.

    vectors_per_trial, when given, overrides mc_samples as the number of
    sign draws behind each expectation estimate.

    Samples candidate vector tuples (x_k) and estimates

        E|| sum_k eps_k S_k x_k ||_p  /  E|| sum_k eps_k x_k ||_p

    with shared sign draws in numerator and denominator.  Candidates mix
    jointly random tuples with tuples concentrated on a single family
    member (random direction and a power-iterated near-maximizing
    direction), so the estimate always dominates the best single-operator
    norm the probes can see.  The reported value is the max over
    candidates; stderr comes from 16 batch means of the winning ratio.
    """
    if vectors_per_trial is not None:
        mc_samples = int(vectors_per_trial)
    family = list(family)
    if not family:
        raise EmptyFamily("rbound_estimate needs at least one operator")
    dim = family[0].dim
    p = family[0].space_p
    for S in family:
        if S.dim != dim or S.space_p != p:
            raise ValueError("family members must share dim and space_p")
    N = len(family)
    mats = np.stack([S.entries for S in family])

    candidates = []
    rng_master = _rng.stream(seed, "rbound", N, dim)
    for t in range(trials):
        kind = t % 3
        if kind == 0:
            xs = np.stack([_rng.unit_pnorm_vector(rng_master, dim, p) for _ in range(N)])
        elif kind == 1:
            k = (t // 3) % N
            xs = np.zeros((N, dim), dtype=complex)
            xs[k] = _rng.unit_pnorm_vector(rng_master, dim, p)
        else:
            k = (t // 3) % N
            xs = np.zeros((N, dim), dtype=complex)
            xs[k] = _top_direction(mats[k], p, rng_master)
        candidates.append(xs)

    n_batches = 16
    per_batch = max(mc_samples // n_batches, 4)
    signs = _rng.sign_matrix(_rng.stream(seed, "rbound-signs"), (n_batches * per_batch, N), sign_kind)

    best_ratio = -1.0
    best_batches = None
    for xs in candidates:
        Sx = np.einsum("kij,kj->ki", mats, xs)  # rows: S_k x_k
        num = np.linalg.norm(signs @ Sx, p, axis=1)
        den = np.linalg.norm(signs @ xs, p, axis=1)
        num_b = num.reshape(n_batches, per_batch).mean(axis=1)
        den_b = den.reshape(n_batches, per_batch).mean(axis=1)
        if np.any(den_b <= 0):
            continue
        ratio = float(num.mean() / den.mean())
        if ratio > best_ratio:
            best_ratio = ratio
            best_batches = num_b / den_b
    stderr = float(np.std(best_batches, ddof=1) / math.sqrt(n_batches))
    return RBoundEstimate(
        value=best_ratio,
        stderr=stderr,
        samples=n_batches * per_batch * len(candidates),
        sign_kind=sign_kind,
        family_size=N,
    )


def _top_direction(M, p, rng):
    if p == 2.0:
        # exact top right singular vector
        _, _, vh = scipy.linalg.svd(M)
        return vh[0].conj()
    # dual power iterations toward the l^p maximizing direction
    x = _rng.unit_pnorm_vector(rng, M.shape[0], p)
    q = p / (p - 1.0)
    for _ in range(24):
        y = M @ x
        if np.linalg.norm(y, p) == 0:
            return x
        z = M.conj().T @ numkernel._dual_vector(y, p)
        nz = np.linalg.norm(z, q)
        if nz == 0:
            return x
        x = numkernel._dual_vector(z, q)
        x = x / np.linalg.norm(x, p)
    return x


def ergodic_split(T, tol=1e-8):
    """Complementary spectral projections for the eigenvalue-1 cluster.

    Returns (P_ker, P_ran) with P_ker + P_ran = I, T P_ker = P_ker within
    tol, and (I - T) injective on the range of P_ran.  Requires the
    cluster to be semisimple; a defective Jordan structure raises
    NonSemisimple.  Uses an ordered Schur form and a Sylvester solve for
    the invariant-subspace splitting.
    """
    U, Q = scipy.linalg.schur(T.entries, output="complex")
    diag = np.diag(U)
    in_cluster = np.abs(diag - 1.0) <= tol
    m = int(np.sum(in_cluster))
    n = T.dim
    if m == 0:
        Z = Operator(np.zeros((n, n)), T.space_p)
        return Z, numkernel.identity_like(T)
    if m == n:
        # the whole spectrum sits at 1: semisimple only if T is (near) I
        if np.linalg.norm(T.entries - np.eye(n), 2) > max(10.0 * tol, 1e-12):
            raise NonSemisimple("eigenvalue-1 cluster is defective")
        return numkernel.identity_like(T), Operator(np.zeros((n, n)), T.space_p)
    U, Q, _ = scipy.linalg.schur(T.entries, output="complex",
                                 sort=lambda lam: abs(lam - 1.0) <= tol)
    U11 = U[:m, :m]
    U12 = U[:m, m:]
    U22 = U[m:, m:]
    # semisimplicity of the cluster: the leading block must be (close to) I
    if np.linalg.norm(U11 - np.eye(m), 2) > max(10.0 * tol, 1e-12):
        raise NonSemisimple(
            f"eigenvalue-1 cluster is defective (||U11 - I|| = {np.linalg.norm(U11 - np.eye(m), 2):.2e})"
        )
    Y = scipy.linalg.solve_sylvester(U11, -U22, U12)
    P_tilde = np.zeros((n, n), dtype=complex)
    P_tilde[:m, :m] = np.eye(m)
    P_tilde[:m, m:] = Y
    P = Q @ P_tilde @ Q.conj().T
    P_ker = Operator(P, T.space_p)
    P_ran = Operator(np.eye(n) - P, T.space_p)
    # contract checks
    if operator_norm(Operator(T.entries @ P - P, T.space_p)) > max(100.0 * tol, 1e-10):
        raise NonSemisimple("projection does not commute with T to tolerance")
    return P_ker, P_ran


def classify(power_trend, dd_slope, power_value):
    """Trend-based classification used by diagnose()."""
    if power_trend == "overflow":
        return "NotPowerBounded"
    stable = power_trend == "bounded" and power_value <= _OVERFLOW_LIMIT
    if stable and dd_slope <= 0.1:
        return "RittLikely"
    if stable and abs(dd_slope - 1.0) <= 0.1:
        return "PowerBoundedNotRitt"
    return "Inconclusive"


def diagnose(T, N=128, K=256, with_rbound=False, rbound_trials=48, seed=0,
             vertex_tol=1e-9, threads=1):
    """Full diagnostics report for one operator."""
    radii = default_radii()
    angles = default_angles()
    rc, growth = ritt_constant(T, radii, angles)
    pb, ptrend = power_bound(T, N)
    ddv, slope = dd_bound(T, K)
    st = stolz_type_of_spectrum(T, vertex_tol)
    rb = None
    if with_rbound:
        fam = _power_family(T, min(N, 16))
        rb = rbound_estimate(fam, trials=rbound_trials, seed=seed, threads=threads)
    return DiagnosticsReport(
        ritt_constant=rc,
        ritt_growth_flag=growth,
        power_bound=pb,
        power_horizon=N,
        power_trend=ptrend,
        dd_bound=ddv,
        dd_horizon=K,
        dd_trend=slope,
        stolz_type_spec=st,
        classification=classify(ptrend, slope, pb),
        rbound=rb,
        metadata={
            "dim": T.dim,
            "p": T.space_p,
            "resolvent_radii": len(radii),
            "resolvent_angles": len(angles),
            "vertex_tol": vertex_tol,
        },
    )


def _power_family(T, N):
    fam = []
    P = np.eye(T.dim, dtype=complex)
    for _ in range(N):
        P = P @ T.entries
        fam.append(Operator(P, T.space_p))
    return fam


def dd_family(T, K):
    """The discrete-derivative family {k T^(k-1)(I-T) : 1 <= k <= K}."""
    fam = []
    B = np.eye(T.dim, dtype=complex) - T.entries
    for k in range(1, K + 1):
        fam.append(Operator(k * B, T.space_p))
        B = T.entries @ B
    return fam


def ritt_grid_to_csv(grid, path):
    """CSV dump (Re lambda, Im lambda, norm) for pseudospectrum-style plots."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_lambda", "im_lambda", "norm"])
        for lam, nrm in grid:
            writer.writerow([repr(lam.real), repr(lam.imag), repr(nrm)])
