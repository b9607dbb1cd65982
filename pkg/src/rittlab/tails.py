"""Closed-form tail bounds for the power-weighted geometric series.

All truncations in the package are certified by these bounds rather than
by "sum until the terms look small".  The central quantity is

    R(s, q, K) = sum_{k > K} k (k+1) ... (k+s-1) q^(k-1),      0 <= q < 1,

the rising-factorial-weighted geometric tail.  It dominates the plain
power-weighted tail because k^s <= k (k+1) ... (k+s-1) for s >= 1, and it
has an exact closed form obtained by differentiating the geometric tail
s times.
"""

import math

import numpy as np


def rising_tail(s, q, K):
    """Exact value of sum_{k>K} k(k+1)...(k+s-1) q^(k-1) for integer s >= 0.

    Computed from the Leibniz expansion of (d/dq)^s [ q^(K+s) / (1-q) ].
    Returns 0.0 when the result underflows; raises for q outside [0, 1).
    """
    s = int(s)
    q = float(q)
    if not 0.0 <= q < 1.0:
        raise ValueError(f"tail bound needs 0 <= q < 1, got {q}")
    if s < 0:
        raise ValueError("s must be a nonnegative integer")
    if q == 0.0:
        return 0.0
    total = 0.0
    # term i: C(s,i) * falling(K+s, i) * q^(K+s-i) * (s-i)! / (1-q)^(s-i+1)
    for i in range(s + 1):
        falling = 1.0
        for j in range(i):
            falling *= (K + s - j)
        term = (
            math.comb(s, i)
            * falling
            * _safe_pow(q, K + s - i)
            * math.factorial(s - i)
            / (1.0 - q) ** (s - i + 1)
        )
        total += term
    return total


def power_geometric_tail(s, q, K):
    """Upper bound for sum_{k>K} k^s q^(k-1), integer s >= 0, 0 <= q < 1."""
    return rising_tail(s, q, K)


def _safe_pow(q, e):
    # q^e without overflow warnings; underflow to 0 is fine for bounds
    if q == 0.0:
        return 0.0 if e > 0 else 1.0
    le = e * math.log(q)
    if le < -745.0:
        return 0.0
    return math.exp(le)


def sqrt_power_tail(q, K):
    """Upper bound for sum_{k>K} sqrt(k) q^(k-1).

    Uses sqrt(k) <= k, so the bound is rising_tail(1, q, K).
    """
    return rising_tail(1, q, K)


def choose_truncation(term_bound, tail_of, target, k0=64, k_cap=1 << 21):
    """Smallest power-of-two-ish K with tail_of(K) <= target.

    ``term_bound`` is unused except as documentation of intent; callers
    pass a closure ``tail_of`` built from the closed forms above.  Raises
    ValueError when the cap is reached (callers convert to their own
    error types).
    """
    K = int(k0)
    while K <= k_cap:
        if tail_of(K) <= target:
            return K
        K *= 2
    raise ValueError("truncation cap reached before tail target was met")


def growth_certificate(norms_of_powers):
    """Geometric decay certificate from computed power norms.

    Given ||T^j|| for j = 0..J, returns (q, C) with q = min_j ||T^j||^(1/j)
    over j >= 1 and C = max_j ||T^j|| / q^j, so that by submultiplicativity

        ||T^k|| <= C q^k   for all k >= 0.

    q may be >= 1; callers must check before using it in a tail bound.
    """
    norms = np.asarray(norms_of_powers, dtype=float)
    if norms.ndim != 1 or norms.size < 2:
        raise ValueError("need ||T^j|| for at least j = 0, 1")
    js = np.arange(1, norms.size)
    with np.errstate(divide="ignore"):
        roots = norms[1:] ** (1.0 / js)
    q = float(np.min(roots))
    if q <= 0.0:
        return 0.0, float(np.max(norms))
    C = float(np.max(norms / q ** np.arange(norms.size)))
    return q, max(C, 1.0)
