"""Dense complex linear algebra on l^p contexts.

An :class:`Operator` is a square complex matrix together with the l^p
norm context in which it acts.  Everything downstream (resolvents,
operator norms, spectra) goes through this module so that the norm
convention is applied consistently.

Norm exactness: for p = 2 the operator norm is the largest singular
value (computed by LAPACK SVD).  For p != 2 the l^p -> l^p norm is
estimated from below by a dual power iteration with restarts; exact
l^p norms of general matrices are not computable in polynomial time,
so those values carry "estimate" status throughout the package.
"""

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from threadpoolctl import threadpool_limits

from . import _rng
from .errors import DimensionCap, IllConditionedWarning, NonConvergence, SingularResolvent

EIG_DIMENSION_CAP = 256
_EIGVEC_COND_WARN = 1e8


def single_thread_blas():
    """Context manager pinning BLAS to one thread.

    The package works with matrices of dimension a few hundred at most;
    BLAS thread handshakes dominate at that scale, so hot loops run the
    kernels single-threaded and parallelize across loop items instead.
    """
    return threadpool_limits(limits=1)


@dataclass(frozen=True)
class Operator:
    """Square complex matrix acting on l^p_n.

    p = 2 means the Hilbert context; any p in (1, inf) is accepted.
    Entries are stored as an immutable complex128 array.
    """

    entries: np.ndarray
    space_p: float = 2.0
    dim: int = field(init=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex, order="C")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"entries must be square, got shape {m.shape}")
        if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
            raise ValueError("entries must be finite (no NaN/Inf)")
        p = float(self.space_p)
        if not p > 1.0:
            raise ValueError(f"space_p must be > 1, got {p}")
        if not math.isfinite(p):
            raise ValueError("space_p must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "space_p", p)
        object.__setattr__(self, "dim", m.shape[0])

    @property
    def is_hilbert(self):
        return self.space_p == 2.0

    @property
    def dual_p(self):
        """Holder conjugate exponent q = p/(p-1)."""
        return self.space_p / (self.space_p - 1.0)

    def adjoint(self):
        """Conjugate transpose, acting on the dual context l^q_n."""
        return Operator(self.entries.conj().T, self.dual_p)

    def with_space(self, p):
        return Operator(self.entries, p)

    def apply(self, v):
        return self.entries @ np.asarray(v, dtype=complex)

    def compose(self, other):
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Operator(self.entries @ other.entries, self.space_p)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return self.compose(other)
        return self.entries @ other


def identity_like(T):
    return Operator(np.eye(T.dim), T.space_p)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset of an operator."""

    eigenvalues: tuple
    radius: float
    eigvec_condition: float

    def __iter__(self):
        return iter(self.eigenvalues)


def resolvent_solve(T, lam, rhs, residual_tol=1e-10):
    """Solve (lam I - T) w = rhs column-wise.

    rhs may be a vector or a matrix of stacked right-hand sides.  Raises
    SingularResolvent when the solve fails outright or the relative
    residual stays above ``residual_tol`` after one step of iterative
    refinement, which signals that lam sits in the numerical spectrum.
    """
    A = lam * np.eye(T.dim) - T.entries
    b = np.asarray(rhs, dtype=complex)
    try:
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
        w = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularResolvent(f"resolvent solve failed at lambda={lam}") from exc
    denom = np.linalg.norm(b)
    if denom == 0.0:
        return w
    r = b - A @ w
    rel = np.linalg.norm(r) / denom
    if rel > residual_tol:
        # one refinement step tightens the residual when conditioning allows
        w = w + scipy.linalg.lu_solve((lu, piv), r, check_finite=False)
        rel = np.linalg.norm(b - A @ w) / denom
    if not np.isfinite(rel) or rel > residual_tol:
        raise SingularResolvent(
            f"lambda={lam} is in the numerical spectrum (relative residual {rel:.2e})"
        )
    return w


def resolvent_apply(T, lam, v):
    """w with (lam I - T) w = v; see resolvent_solve for failure modes."""
    return resolvent_solve(T, lam, np.asarray(v, dtype=complex))


def resolvent_matrix(T, lam):
    """Full resolvent R(lam, T) = (lam I - T)^(-1) as an ndarray."""
    return resolvent_solve(T, lam, np.eye(T.dim, dtype=complex))


def operator_norm(T, restarts=6, max_iter=200, tol=1e-10, seed=0):
    """Norm of T on its l^p context.

    p = 2: the spectral norm (largest singular value), exact to LAPACK
    accuracy.  p != 2: Boyd/Higham dual power iteration from several
    deterministic starting vectors; the returned value is a lower
    estimate of the true l^p -> l^p norm.
    """
    M = T.entries
    if T.is_hilbert:
        if T.dim == 0:
            return 0.0
        return float(scipy.linalg.svdvals(M)[0])
    p = T.space_p
    best = 0.0
    starts = [np.ones(T.dim, dtype=complex)]
    rng = _rng.stream(seed, "pnorm", T.dim)
    for _ in range(max(restarts - 1, 0)):
        starts.append(_rng.unit_pnorm_vector(rng, T.dim, p))
    converged_any = False
    for x0 in starts:
        est, ok = _higham_pnorm(M, p, x0, max_iter, tol)
        converged_any = converged_any or ok
        best = max(best, est)
    if not converged_any:
        raise NonConvergence(f"l^{p} norm iteration did not stabilize in {max_iter} steps")
    return best


def _dual_vector(y, p):
    # duality map for l^p: |y|^(p-1) with the phase of y preserved;
    # entries many orders below the max are dropped so that phase
    # extraction never divides by a denormal
    ay = np.abs(y)
    am = float(ay.max(initial=0.0))
    out = np.zeros_like(y)
    if am == 0.0:
        return out
    nz = ay > am * 1e-200
    out[nz] = ay[nz] ** (p - 1.0) * (y[nz] / ay[nz])
    return out


def _higham_pnorm(M, p, x0, max_iter, tol):
    q = p / (p - 1.0)
    nx = np.linalg.norm(x0, p)
    if nx == 0.0:
        return 0.0, True
    x = x0 / nx
    est = 0.0
    for _ in range(max_iter):
        y = M @ x
        ny = float(np.linalg.norm(y, p))
        if ny == 0.0:
            return 0.0, True
        # normalize before dualizing: the iteration is scale-invariant and
        # unnormalized duals overflow for large resolvent samples
        z = M.conj().T @ _dual_vector(y / ny, p)
        nz = float(np.linalg.norm(z, q))
        if nz <= np.real(np.vdot(x, z)) * (1.0 + 1e-12):
            return ny, True
        if abs(ny - est) <= tol * ny:
            return ny, True
        est = ny
        x = _dual_vector(z / nz, q)
        x = x / np.linalg.norm(x, p)
    # a crawling iterate whose estimate moved below 1e-6 relative in the
    # last step has stabilized for lower-estimate purposes
    y = M @ x
    ny = float(np.linalg.norm(y, p))
    return max(est, ny), abs(ny - est) <= 1e-6 * max(ny, 1e-300)


def vector_norm(v, p):
    return float(np.linalg.norm(np.asarray(v, dtype=complex), p))


def eigenvalues(T, cap=EIG_DIMENSION_CAP):
    """Spectrum of T via the dense nonsymmetric eigensolver.

    Raises DimensionCap above ``cap``.  Emits IllConditionedWarning when
    the eigenvector matrix condition exceeds 1e8 (eigenvalues may then
    carry noticeable error for non-normal T).
    """
    if T.dim > cap:
        raise DimensionCap(f"dim {T.dim} exceeds spectral cap {cap}")
    vals, vecs = np.linalg.eig(T.entries)
    try:
        cond = float(np.linalg.cond(vecs))
    except np.linalg.LinAlgError:
        cond = float("inf")
    if cond > _EIGVEC_COND_WARN:
        warnings.warn(
            f"eigenvector condition {cond:.2e} exceeds {_EIGVEC_COND_WARN:.0e}",
            IllConditionedWarning,
            stacklevel=2,
        )
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    return Spectrum(tuple(vals), float(np.max(np.abs(vals))) if len(vals) else 0.0, cond)


def eigensystem(T, cap=EIG_DIMENSION_CAP):
    """(eigenvalues, eigenvector matrix, condition) without reordering."""
    if T.dim > cap:
        raise DimensionCap(f"dim {T.dim} exceeds spectral cap {cap}")
    vals, vecs = np.linalg.eig(T.entries)
    try:
        cond = float(np.linalg.cond(vecs))
    except np.linalg.LinAlgError:
        cond = float("inf")
    return vals, vecs, cond


def power_norms(T, J):
    """[||T^0||, ||T^1||, ..., ||T^J||] by sequential products."""
    out = [1.0]
    P = np.eye(T.dim, dtype=complex)
    with single_thread_blas():
        for _ in range(J):
            P = P @ T.entries
            out.append(operator_norm(Operator(P, T.space_p)))
    return np.array(out)


def operator_to_json(T):
    """Serialize to the row-major {n, p, re, im} JSON object."""
    return json.dumps(
        {
            "n": T.dim,
            "p": T.space_p,
            "re": T.entries.real.tolist(),
            "im": T.entries.imag.tolist(),
        },
        sort_keys=True,
    )


def operator_from_json(text):
    obj = json.loads(text)
    m = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
    if m.shape != (obj["n"], obj["n"]):
        raise ValueError("matrix shape disagrees with declared n")
    return Operator(m, float(obj["p"]))
