"""Pairing bases, the vector function F_m, and the polylogarithm Li_{-1/2}.

F_m sends a point z of the unit disc to the l2 sequence

    F_m(z) = ( k^(m-1/2) (1-z)^m z^(k-1) )_{k >= 1}.

Pairings here are bilinear (no conjugation).  Against the canonical
basis (e_n) the absolute pairing sums blow up like the polylogarithm,

    sum_n |<F_1(z)|e_n>| = |1-z| Li_{-1/2}(|z|) / |z|,

which grows like (1-|z|)^(-1/2) along Stolz rays into the vertex.  The
alternative family (b_n) built from third and fourth roots of unity
trades that growth for poles at roots of unity outside every Stolz
domain: each pairing gains an extra vanishing factor at z = 1,

    <F_1(z)|b_n> = sqrt(n) (1-z) z^(n-1) (1 - z^c) / (1 - rho_n z),

with rho_n cycling through (a, a^2, b, b^2, b^3) for a = e^(2 pi i/3),
b = i, and c = 3 for the a-rows, 4 for the b-rows.  The window vectors
b_n realizing these closed forms have entries

    (b_n)_{n+l} = rho_n^l sqrt(n / (n+l)),   l = 0..c-1,

overlapping the next index block.  The family keeps the absolute pairing
sums uniformly bounded on every Stolz domain (they tend to 0 at the
vertex), which is what the sweeps certify.  Its Gram matrix has a flat
upper frame bound but a slowly decaying lower one (lambda_min ~ B^-2
over B blocks); gram_condition_profile() measures both, and the strictly
block-diagonal alternative rows ("block_rows" basis) with uniformly
bounded block condition numbers are provided for comparison.  No choice
with the displayed sparsity achieves both a flat Gram condition and
uniformly bounded absolute pairing sums: the bounded sums force every
block row sum to vanish, which makes a 5x5 block singular.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import stolz, tails
from .errors import OutOfRange, TailBoundFailure

ROOT_A = complex(math.cos(2.0 * math.pi / 3.0), math.sin(2.0 * math.pi / 3.0))
ROOT_B = 1j

# per-residue window data: (root rho, cycle length c with rho^c = 1)
_WINDOW_PATTERN = (
    (ROOT_A, 3),
    (ROOT_A * ROOT_A, 3),
    (ROOT_B, 4),
    (ROOT_B * ROOT_B, 4),
    (ROOT_B ** 3, 4),
)

# the 5x5 block seed: rows over the third and fourth roots of unity
A_MATRIX = np.array(
    [
        [1.0, ROOT_A, ROOT_A ** 2, 0.0, 0.0],
        [1.0, ROOT_A ** 2, ROOT_A ** 4, 0.0, 0.0],
        [0.0, 1.0, ROOT_B, ROOT_B ** 2, ROOT_B ** 4],
        [0.0, 1.0, ROOT_B ** 2, ROOT_B ** 4, ROOT_B ** 6],
        [0.0, 1.0, ROOT_B ** 3, ROOT_B ** 6, ROOT_B ** 9],
    ],
    dtype=complex,
)

GAMMA_3_HALVES = math.gamma(1.5)

# zeta(-1/2 - j) for the asymptotic branch of Li_{-1/2}
_ZETA_HALF = (
    -0.20788622497735456602,
    -0.02548520188983303595,
    0.0085169287778503305424,
    0.0044410113354794319585,
    -0.0030916692472158338448,
)
_ASYMPTOTIC_SWITCH = 0.9999
_N_CAP = 1 << 21


def scaling_block(k):
    """D_k = diag( sqrt((5k+1)/(5k+j)) ), j = 1..5."""
    j = np.arange(1, 6)
    return np.diag(np.sqrt((5.0 * k + 1.0) / (5.0 * k + j)))


@dataclass(frozen=True)
class RieszBasis:
    """Block data and window accessors for the root-of-unity basis.

    blocks holds A_k = A D_k for k = 0..block_count-1; their condition
    numbers are uniformly bounded by cond(A) max_k cond(D_k).  The
    pairing vectors themselves are the overlapping windows described in
    the module docstring; basis_vector(n) returns (start, entries) with
    start the 0-based coordinate of the first entry.
    """

    block_count: int
    blocks: tuple
    a: complex = ROOT_A
    b: complex = ROOT_B

    @classmethod
    def build(cls, block_count):
        blocks = tuple(A_MATRIX @ scaling_block(k) for k in range(block_count))
        return cls(block_count=block_count, blocks=blocks)

    def block_of(self, n):
        """(block index, row index 1..5) housing basis vector n >= 1."""
        return (n - 1) // 5, ((n - 1) % 5) + 1

    def basis_vector(self, n):
        return window_vector(n)


def window_vector(n):
    """(start, entries) of b_n: entries rho^l sqrt(n/(n+l)) at n-1+l."""
    if n < 1:
        raise ValueError("basis index starts at 1")
    rho, c = _WINDOW_PATTERN[(n - 1) % 5]
    ls = np.arange(c)
    entries = rho ** ls * np.sqrt(n / (n + ls))
    return n - 1, entries


def block_row_vector(n):
    """(start, entries) of row n of the block-diagonal family A_k = A D_k."""
    k, i = (n - 1) // 5, (n - 1) % 5
    row = (A_MATRIX @ scaling_block(k))[i]
    return 5 * k, row


def F_m_entries(z, m, K):
    """Entries k = 1..K of F_m(z); requires |z| < 1."""
    if abs(z) >= 1.0:
        raise OutOfRange(f"|z| must be < 1, got {abs(z)}")
    if m < 1:
        raise ValueError("m must be >= 1")
    k = np.arange(1, K + 1, dtype=float)
    return k ** (m - 0.5) * (1.0 - z) ** m * z ** (k - 1)


def closed_form_pairings(z, n):
    """<F_1(z)|b_n> in both closed forms; asserts their equality.

    Returns the quotient form sqrt(n)(1-z) z^(n-1) (1-z^c)/(1-rho z) and
    checks it against the expanded product form
    sqrt(n)(1-z) z^(n-1) (1 + rho z + ... + rho^(c-1) z^(c-1)) to 1e-12.
    """
    if abs(z) >= 1.0:
        raise OutOfRange(f"|z| must be < 1, got {abs(z)}")
    rho, c = _WINDOW_PATTERN[(n - 1) % 5]
    base = math.sqrt(n) * (1.0 - z) * z ** (n - 1)
    product_form = base * sum(rho ** l * z ** l for l in range(c))
    quotient_form = base * (1.0 - z ** c) / (1.0 - rho * z)
    if abs(product_form - quotient_form) > 1e-12 * max(1.0, abs(product_form)):
        raise AssertionError(
            f"closed-form mismatch at n={n}, z={z}: {product_form} vs {quotient_form}"
        )
    return quotient_form


def _series_pairing(z, m, start, entries, K):
    """Bilinear pairing of F_m(z) against a window vector, truncated at K."""
    idx = np.arange(start + 1, start + 1 + entries.size, dtype=float)
    live = idx <= K
    if not np.any(live):
        return 0.0 + 0.0j
    k = idx[live]
    vals = k ** (m - 0.5) * (1.0 - z) ** m * z ** (k - 1.0)
    return complex(np.sum(vals * entries[live]))


@dataclass(frozen=True)
class PairingTable:
    """Pairings of F_m(z) against one basis at one grid point."""

    z: complex
    values: tuple
    l1: float
    l2: float
    basis: str
    m: int
    truncation_N: int
    tail_bound: float


def _pairing_tail(az, m, N, basis):
    """Bound on sum_{n>N} |pairing_n| for |z| = az."""
    if basis == "canonical":
        # |<F_m|e_n>| = n^(m-1/2) |1-z|^m az^(n-1); generous |1-z| <= 2
        return 2.0 ** m * tails.power_geometric_tail(m, az, N)
    # window/block vectors: <= 8 entries of modulus <= 1, index shifts <= 7,
    # and (n+7)^m <= 8^m n^m
    return 8.0 * 16.0 ** m * tails.power_geometric_tail(m, az, N)


def pairing_table(z, m, basis="riesz", tail_rel=1e-3):
    """All pairings of F_m(z) against the chosen basis, with certified tail.

    basis is one of canonical, riesz (the window family), block_rows
    (rows of the strictly block-diagonal family, kept for Gram
    comparisons).  Raises TailBoundFailure when |z| is too close to 1
    for the truncation budget.
    """
    z = complex(z)
    az = abs(z)
    if az >= 1.0:
        raise OutOfRange(f"|z| must be < 1, got {az}")

    N = 64
    while True:
        vals = _pairings_upto(z, m, basis, N)
        l1 = float(np.sum(np.abs(vals)))
        tail = _pairing_tail(az, m, N, basis)
        if l1 > 0 and tail <= tail_rel * l1:
            break
        if l1 == 0.0 and tail <= 1e-300:
            break
        if N >= _N_CAP:
            raise TailBoundFailure(f"|z|={az} too close to 1 for the truncation budget")
        N *= 2
    l2 = float(np.linalg.norm(vals))
    return PairingTable(z, tuple(vals.tolist()), l1, l2, basis, m, N, tail)


def _pairings_upto(z, m, basis, N):
    if basis == "canonical":
        return F_m_entries(z, m, N)
    if basis == "riesz":
        return _window_pairings(z, m, N)
    if basis == "block_rows":
        return _block_row_pairings(z, m, N)
    raise ValueError(f"unknown basis {basis!r}")


def _window_pairings(z, m, N):
    """Vectorized <F_m(z)|b_n> for n = 1..N.

    Summand over the window: (b_n)_{n+l} (n+l)^(m-1/2) (1-z)^m z^(n+l-1)
    with (b_n)_{n+l} = rho^l sqrt(n/(n+l)), so the pairing is
    sqrt(n) (1-z)^m z^(n-1) sum_l rho^l z^l (n+l)^(m-1).
    """
    ns = np.arange(1, N + 1, dtype=float)
    out = np.zeros(N, dtype=complex)
    front = (1.0 - z) ** m * np.sqrt(ns) * z ** (ns - 1.0)
    for res, (rho, c) in enumerate(_WINDOW_PATTERN):
        sel = np.arange(res, N, 5)
        if sel.size == 0:
            continue
        n_sel = ns[sel]
        inner = np.zeros(sel.size, dtype=complex)
        for l in range(c):
            inner += rho ** l * z ** l * (n_sel + l) ** (m - 1)
        out[sel] = front[sel] * inner
    return out


def _block_row_pairings(z, m, N):
    """Vectorized pairings against rows of the block-diagonal family."""
    out = np.zeros(N, dtype=complex)
    n_blocks = (N + 4) // 5
    ks = np.arange(n_blocks, dtype=float)
    js = np.arange(1, 6, dtype=float)
    # coords 5k+j carry weight (5k+j)^(m-1/2) sqrt((5k+1)/(5k+j))
    coord = 5.0 * ks[:, None] + js[None, :]
    weight = coord ** (m - 0.5) * np.sqrt((5.0 * ks[:, None] + 1.0) / coord)
    zpow = z ** (coord - 1.0) * (1.0 - z) ** m
    for i in range(5):
        vals = (A_MATRIX[i][None, :] * weight * zpow).sum(axis=1)
        idx = 5 * np.arange(n_blocks) + i
        live = idx < N
        out[idx[live]] = vals[live]
    return out


def make_stolz_grid(omega, n_points, min_vertex_distance=1e-2, max_vertex_distance=None,
                    angle_fraction=0.98):
    """Deterministic grid inside Stolz_omega accumulating at the vertex.

    Points z = 1 - s e^(i psi) on rays from the vertex, with s log-spaced
    down to min_vertex_distance and |psi| < angle_fraction * arccos(1/omega).
    Only points passing the strict membership test are returned.
    """
    dom = stolz.StolzDomain(omega)
    psi_max = angle_fraction * dom.half_angle
    if max_vertex_distance is None:
        max_vertex_distance = 1.0 - 1.0 / omega  # comfortably interior scale
    n_rays = max(int(math.sqrt(n_points)), 3)
    while True:
        n_radial = max(n_points // n_rays + 2, 3)
        psis = np.linspace(-psi_max, psi_max, n_rays)
        ss = np.geomspace(min_vertex_distance, max_vertex_distance, n_radial)
        pts = []
        for psi in psis:
            for s in ss:
                z = 1.0 - s * complex(math.cos(psi), math.sin(psi))
                if stolz.contains(dom, z):
                    pts.append(z)
        if len(pts) >= n_points:
            return pts[:n_points]
        n_rays += 2


def pairing_sweep(domain, m, basis, grid, tail_rel=1e-3):
    """Pairing tables over a grid; points beyond the tail budget are skipped.

    Returns (tables, skipped) with skipped the list of offending points.
    """
    tables = []
    skipped = []
    for z in grid:
        if not stolz.contains(domain, z):
            raise ValueError(f"grid point {z} is not inside the domain")
        try:
            tables.append(pairing_table(z, m, basis, tail_rel))
        except TailBoundFailure:
            skipped.append(complex(z))
    return tables, skipped


def sweep_to_csv(tables, path):
    """CSV dump (Re z, Im z, l1, l2, basis, m) consumed by plotting recipes."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_z", "im_z", "l1", "l2", "basis", "m"])
        for t in tables:
            writer.writerow([repr(t.z.real), repr(t.z.imag), repr(t.l1), repr(t.l2), t.basis, t.m])


def polylog_half(x):
    """Li_{-1/2}(x) = sum_{k>=1} sqrt(k) x^k for 0 <= x < 1.

    Direct summation with a certified relative tail below 1e-10; above
    x = 0.9999 the Gamma(3/2) (-log x)^(-3/2) asymptotic expansion with
    zeta corrections takes over (its truncation error there is far below
    the series target).
    """
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise OutOfRange(f"polylog_half needs 0 <= x < 1, got {x}")
    if x == 0.0:
        return 0.0
    if x > _ASYMPTOTIC_SWITCH:
        mu = math.log(x)
        acc = GAMMA_3_HALVES * (-mu) ** -1.5
        fact = 1.0
        for j, zj in enumerate(_ZETA_HALF):
            acc += zj * mu ** j / fact
            fact *= j + 1
        return acc
    total = 0.0
    K = 0
    chunk = 4096
    while True:
        ks = np.arange(K + 1, K + chunk + 1, dtype=float)
        total += float(np.sum(np.sqrt(ks) * x ** ks))
        K += chunk
        tail = x * tails.sqrt_power_tail(x, K)  # sum_{k>K} sqrt(k) x^k
        if tail <= 1e-10 * total:
            return total
        if K >= 1 << 24:
            raise TailBoundFailure(f"series budget exhausted at x={x}")


def gram_condition_profile(block_counts, basis="riesz"):
    """(B, lambda_min, lambda_max, cond) of the Gram matrix of 5B vectors.

    For the window family the upper frame bound is flat while the lower
    one decays like B^-2; for block_rows both bounds are flat.
    """
    out = []
    for B in block_counts:
        n_vec = 5 * B
        dim = n_vec + 8
        V = np.zeros((n_vec, dim), dtype=complex)
        for n in range(1, n_vec + 1):
            start, entries = window_vector(n) if basis == "riesz" else block_row_vector(n)
            V[n - 1, start:start + entries.size] = entries
        ev = np.linalg.eigvalsh(V @ V.conj().T)
        lam_min, lam_max = float(ev[0]), float(ev[-1])
        out.append((B, lam_min, lam_max, lam_max / lam_min))
    return out


def block_condition_numbers(riesz_basis):
    """cond(A_k) for every built block, with the product bound they obey."""
    conds = [float(np.linalg.cond(blk)) for blk in riesz_basis.blocks]
    bound = float(np.linalg.cond(A_MATRIX)) * max(
        float(np.linalg.cond(scaling_block(k))) for k in range(riesz_basis.block_count)
    )
    return conds, bound
