"""Square functions, dual square functions, and gamma-norms.

The m-th square function of an operator T maps a vector x to the
sequence

    Phi_m x = ( k^(m-1/2) T^(k-1) (I-T)^m x )_{k >= 1},

measured in the gamma(l2; X) norm  (E || sum_k g_k v_k ||_X^2)^(1/2)
over independent standard Gaussians g_k.  On the Hilbert context this
norm is the plain l2 sum of the ||v_k||_2^2; on l^p it is estimated by
Monte Carlo.  Truncations are certified by closed-form geometric tails
driven by a decay certificate q < 1 (spectral radius, tightened by
computed power-norm checkpoints when the operator is far from normal).
"""

import csv
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _rng, numkernel, tails
from .errors import NoDecay
from .numkernel import Operator

_MC_DEFAULT_SAMPLES = 4096
_MC_BATCHES = 16
_TAIL_REL = 0.01  # certified tail below 1% of the reported value
_CHECKPOINT_POWERS = 48


@dataclass(frozen=True)
class GammaNorm:
    """gamma(l2; X) norm value with provenance.

    stderr is 0 for the exact Hilbert path.  tail_bound is the certified
    bound on the contribution of the discarded sequence tail to the
    reported value.
    """

    value: float
    stderr: float
    method: str
    truncation_K: int
    tail_bound: float


@dataclass(frozen=True)
class SqfSequence:
    """Lazy square-function sequence k^(m-1/2) T^(k-1) (I-T)^m x."""

    source: Operator
    x: np.ndarray
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        object.__setattr__(self, "x", np.asarray(self.x, dtype=complex))

    def entries(self, K):
        """Stacked entries k = 1..K as a (K, dim) array, by running products."""
        T = self.source.entries
        B = np.eye(self.source.dim, dtype=complex) - T
        w = self.x
        for _ in range(self.m):
            w = B @ w
        out = np.empty((K, self.source.dim), dtype=complex)
        for k in range(1, K + 1):
            out[k - 1] = k ** (self.m - 0.5) * w
            w = T @ w
        return out


def decay_certificate(T, extra_powers=_CHECKPOINT_POWERS):
    """(q, C) with ||T^k|| <= C q^k; raises NoDecay when q >= 1.

    q is the best of the spectral radius and the power-norm checkpoint
    root min_j ||T^j||^(1/j); the latter also covers non-normal
    transient growth through the constant C.
    """
    norms = numkernel.power_norms(T, extra_powers)
    q, C = tails.growth_certificate(norms)
    if q >= 1.0 - 1e-12:
        raise NoDecay(
            "no geometric decay certificate: spectral radius bound >= 1 "
            "(split off the peripheral spectrum first)"
        )
    return q, C


def _sequence_tail_bound_sq(seq, q, C, K):
    """Closed-form bound on sum_{k>K} ||v_k||^2 for a SqfSequence."""
    T = seq.source
    B = np.eye(T.dim, dtype=complex) - T.entries
    Bm = np.linalg.matrix_power(B, seq.m)
    lead = numkernel.vector_norm(Bm @ seq.x, T.space_p)
    # ||v_k|| <= k^(m-1/2) C q^(k-1) ||(I-T)^m x||; square and sum
    coeff = (C * lead) ** 2
    s = 2 * seq.m - 1
    return coeff * tails.power_geometric_tail(s, q * q, K)


def choose_truncation(seq, rel=_TAIL_REL):
    """(K, tail_bound_on_norm_sq) with the tail below rel of the head."""
    q, C = decay_certificate(seq.source)
    head = None
    K = 64
    while True:
        ent = seq.entries(K)
        head_sq = float(np.sum(np.abs(ent) ** 2)) if seq.source.is_hilbert else None
        # scale target by the head l2 mass (any p: l2 head is a usable scale)
        head = float(np.sum(np.abs(ent) ** 2))
        tail_sq = _sequence_tail_bound_sq(seq, q, C, K)
        if head == 0.0:
            return K, tail_sq
        if tail_sq <= (rel ** 2) * head:
            return K, tail_sq
        if K >= (1 << 21):
            raise NoDecay("truncation cap reached before the tail target was met")
        K *= 2


def gamma_norm(seq_or_vectors, method="hilbert_exact", mc_samples=_MC_DEFAULT_SAMPLES,
               seed=0, space_p=None, rel=_TAIL_REL):
    """gamma(l2; X) norm of a square-function sequence or explicit vectors.

    method is one of hilbert_exact (p = 2 only), gaussian_mc, or
    rademacher_mc.  Explicit vector lists are taken as already truncated
    (tail bound 0); SqfSequence inputs are truncated with a certified
    geometric tail below 1% of the value.
    """
    if isinstance(seq_or_vectors, SqfSequence):
        seq = seq_or_vectors
        p = seq.source.space_p
        K, tail_sq = choose_truncation(seq, rel)
        vectors = seq.entries(K)
    else:
        vectors = np.asarray(seq_or_vectors, dtype=complex)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        p = 2.0 if space_p is None else float(space_p)
        K, tail_sq = vectors.shape[0], 0.0

    if method == "hilbert_exact":
        if p != 2.0:
            raise ValueError("hilbert_exact requires the p = 2 context")
        value_sq = float(np.sum(np.abs(vectors) ** 2))
        value = math.sqrt(value_sq)
        tail = tail_sq / (2.0 * value) if value > 0 else math.sqrt(tail_sq)
        return GammaNorm(value, 0.0, "hilbert_exact", K, tail)

    if method not in ("gaussian_mc", "rademacher_mc"):
        raise ValueError(f"unknown method {method!r}")
    if p < 2.0:
        # l^p dominates l^2 only up to n^(1/p-1/2); widen the tail bound
        tail_sq *= vectors.shape[1] ** (2.0 / p - 1.0)
    kind = "gaussian" if method == "gaussian_mc" else "rademacher"
    rng = _rng.stream(seed, "gamma", kind, K, vectors.shape[1])
    per_batch = max(mc_samples // _MC_BATCHES, 4)
    signs = _rng.sign_matrix(rng, (_MC_BATCHES * per_batch, K), kind)
    sums = signs @ vectors  # (samples, dim)
    norms_sq = np.linalg.norm(sums, p, axis=1) ** 2
    batch_means = norms_sq.reshape(_MC_BATCHES, per_batch).mean(axis=1)
    mean_sq = float(norms_sq.mean())
    value = math.sqrt(mean_sq)
    se_mean = float(np.std(batch_means, ddof=1) / math.sqrt(_MC_BATCHES))
    stderr = se_mean / (2.0 * value) if value > 0 else math.sqrt(se_mean)
    tail = tail_sq / (2.0 * value) if value > 0 else math.sqrt(tail_sq)
    return GammaNorm(value, stderr, method, K, tail)


def gram_matrix(T, m, rel=_TAIL_REL):
    """Truncated Gram sum G_K = sum_k M_k^H M_k with a certified tail.

    M_k = k^(m-1/2) T^(k-1) (I-T)^m.  Returns (G, K, tail_on_opnorm):
    the spectral norm of the discarded tail of the sum is at most
    tail_on_opnorm, so eigenvalue bounds on G transfer to the full sum.
    """
    q, C = decay_certificate(T)
    Bm = np.linalg.matrix_power(np.eye(T.dim, dtype=complex) - T.entries, m)
    lead = numkernel.operator_norm(Operator(Bm, 2.0))
    s = 2 * m - 1

    def tail_of(K):
        return (C * lead) ** 2 * tails.power_geometric_tail(s, q * q, K)

    K = 64
    G = np.zeros((T.dim, T.dim), dtype=complex)
    B = Bm.copy()
    k = 1
    while True:
        with numkernel.single_thread_blas():
            while k <= K:
                G += k ** (2 * m - 1) * (B.conj().T @ B)
                B = T.entries @ B
                k += 1
        head = float(np.max(np.abs(np.diag(G)))) or 1.0
        t = tail_of(K)
        lam_max = float(scipy.linalg.eigvalsh(G)[-1])
        if t <= (rel ** 2) * max(lam_max, head):
            return G, K, t
        if K >= (1 << 21):
            raise NoDecay("truncation cap reached before the Gram tail target was met")
        K *= 2


def phi_m_norm(T, m, probe_count=32, method=None, mc_samples=_MC_DEFAULT_SAMPLES, seed=0):
    """Norm estimate of the square-function map Phi_m on X.

    Hilbert context: exact as sqrt(lambda_max) of the truncated Gram sum
    (the tail is controlled in operator norm, so the value is exact to
    the certified tail).  Otherwise: maximum of the Monte-Carlo gamma
    norm over random l^p-sphere probes plus coordinate probes, reported
    as a lower estimate.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if method is None:
        method = "hilbert_exact" if T.is_hilbert else "gaussian_mc"
    if method == "hilbert_exact":
        G, K, tail = gram_matrix(T, m)
        lam = float(scipy.linalg.eigvalsh(G)[-1])
        return math.sqrt(lam)
    rng = _rng.stream(seed, "phinorm", T.dim, m)
    best = 0.0
    probes = [np.eye(T.dim, dtype=complex)[j] for j in range(min(T.dim, 8))]
    for _ in range(probe_count):
        probes.append(_rng.unit_pnorm_vector(rng, T.dim, T.space_p))
    for i, x in enumerate(probes):
        x = x / numkernel.vector_norm(x, T.space_p)
        g = gamma_norm(SqfSequence(T, x, m), method=method, mc_samples=mc_samples,
                       seed=seed + 7919 * (i + 1))
        best = max(best, g.value)
    return best


def phi_m_dual_norm(T, m, probe_count=32, mc_samples=_MC_DEFAULT_SAMPLES, seed=0):
    """Norm estimate of the dual square-function map Phi_m^*.

    Computed as phi_m_norm of the conjugate transpose acting on the dual
    exponent q = p/(p-1); on finite-dimensional l^p with 1 < p < inf the
    dual of the gamma space is the gamma space of the dual, so this is
    the honest dual-norm surrogate.
    """
    Tq = T.adjoint()
    method = "hilbert_exact" if Tq.is_hilbert else "gaussian_mc"
    return phi_m_norm(Tq, m, probe_count=probe_count, method=method,
                      mc_samples=mc_samples, seed=seed)


def lower_bound_check(T, m, probes=32, mc_samples=_MC_DEFAULT_SAMPLES, seed=0):
    """Estimate of inf over unit x of ||Phi_m x||_gamma.

    Hilbert context: sqrt(lambda_min) of the truncated Gram sum, a true
    lower bound since the discarded tail is positive semidefinite.
    Otherwise: the minimum over random probes (an upper estimate of the
    infimum, useful as a zero detector).

    An eigenvalue at 1 answers the question in closed form: kernel
    vectors of (I - T) kill every sequence entry, so the infimum is 0.
    """
    spec = numkernel.eigenvalues(T)
    if any(abs(1.0 - lam) < 1e-9 for lam in spec):
        return 0.0
    if T.is_hilbert:
        G, K, tail = gram_matrix(T, m)
        lam = float(scipy.linalg.eigvalsh(G)[0])
        return math.sqrt(max(lam, 0.0))
    rng = _rng.stream(seed, "philow", T.dim, m)
    worst = math.inf
    for i in range(probes):
        x = _rng.unit_pnorm_vector(rng, T.dim, T.space_p)
        g = gamma_norm(SqfSequence(T, x, m), method="gaussian_mc",
                       mc_samples=mc_samples, seed=seed + 104729 * (i + 1))
        worst = min(worst, g.value)
    return worst


def dual_pair(xprime_vectors, x_vectors):
    """Trace-duality pairing sum_k <x'_k, x_k> (sesquilinear in x')."""
    xp = np.asarray(xprime_vectors, dtype=complex)
    xv = np.asarray(x_vectors, dtype=complex)
    K = min(xp.shape[0], xv.shape[0])
    return complex(np.sum(np.conj(xp[:K]) * xv[:K]))


def gamma_dual_norm_estimate(xprime_vectors, p, candidates=64, mc_samples=_MC_DEFAULT_SAMPLES,
                             seed=0):
    """Lower estimate of the trace-duality norm of a finite dual sequence.

    Maximizes |sum_k <x'_k, x_k>| / gamma_mc((x_k)) over sampled
    directions.  The candidate set contains the copy tuple x_k = x'_k
    (tight for parallel sequences, where the gamma norm is the plain l2
    sum) and the per-vector Holder-aligned tuple, plus random draws.
    """
    xp = np.asarray(xprime_vectors, dtype=complex)
    K, dim = xp.shape
    q = p / (p - 1.0)
    rng = _rng.stream(seed, "gdual", K, dim)
    cands = [xp.copy()]
    ax = np.abs(xp)
    with np.errstate(divide="ignore", invalid="ignore"):
        aligned = np.where(ax > 0, xp * ax ** (q - 2.0), 0.0)
    aligned = np.nan_to_num(aligned)
    cands.append(aligned)
    for _ in range(candidates):
        cands.append(rng.standard_normal((K, dim)) + 1j * rng.standard_normal((K, dim)))
    best = 0.0
    for i, xs in enumerate(cands):
        g = gamma_norm(xs, method="gaussian_mc", mc_samples=mc_samples,
                       seed=seed + 31 * (i + 1), space_p=p)
        if g.value == 0.0:
            continue
        best = max(best, abs(dual_pair(xp, xs)) / g.value)
    return best


def sequence_to_csv(seq, K, path):
    """Dump (k, ||v_k||) decay data for plotting."""
    ent = seq.entries(K)
    p = seq.source.space_p
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "norm"])
        for k in range(1, K + 1):
            writer.writerow([k, repr(float(np.linalg.norm(ent[k - 1], p)))])
