import math

import numpy as np
import pytest

from rittlab import diagnostics, numkernel, squarefn, zoo
from rittlab.errors import NoDecay
from rittlab.numkernel import Operator
from rittlab.squarefn import SqfSequence

from conftest import random_diag_operator


def scalar_quotient(lam):
    """Closed form |1-lam| / (1 - |lam|^2) for the m=1 diagonal entries."""
    return abs(1 - lam) / (1 - abs(lam) ** 2)


def test_gamma_norm_zero_operator():
    T = Operator(np.zeros((2, 2)))
    g = squarefn.gamma_norm(SqfSequence(T, np.array([1.0, 0.0]), 1))
    assert g.value == pytest.approx(1.0)
    assert g.method == "hilbert_exact"
    assert g.stderr == 0.0


def test_gamma_norm_scalar_half():
    # sum_k k t^(k-1) = (1-t)^-2 with t = 1/4 gives (1/2)^2 * 16/9 -> 2/3
    T = Operator(np.diag([0.5]))
    g = squarefn.gamma_norm(SqfSequence(T, np.array([1.0]), 1))
    assert g.value == pytest.approx(2.0 / 3.0, abs=1e-10)
    assert g.tail_bound < 0.01 * g.value


def test_gamma_norm_rotation_no_decay():
    R = zoo.generate(zoo.rotation(math.pi / 2))
    with pytest.raises(NoDecay):
        squarefn.gamma_norm(SqfSequence(R, np.array([1.0, 0.0]), 1))


def test_sequence_entries_running_product():
    T = Operator(np.diag([0.5, -0.2]))
    x = np.array([1.0, 1.0])
    ent = SqfSequence(T, x, 2).entries(6)
    for k in range(1, 7):
        M = np.linalg.matrix_power(T.entries, k - 1) @ (np.eye(2) - T.entries) @ (
            np.eye(2) - T.entries
        )
        expected = k ** 1.5 * M @ x
        assert np.allclose(ent[k - 1], expected, rtol=1e-12)


def test_phi_norm_scalar_half():
    T = Operator(np.diag([0.5]))
    assert squarefn.phi_m_norm(T, 1) == pytest.approx(2.0 / 3.0, abs=1e-10)


def test_phi_norm_zero_operator_any_m():
    T = Operator(np.zeros((3, 3)))
    for m in (1, 2, 3):
        assert squarefn.phi_m_norm(T, m) == pytest.approx(1.0, abs=1e-12)


def test_phi_norm_diagonal_closed_form(rng):
    # per-eigenvector closed form and the Stolz-quotient bound
    T = zoo.generate(zoo.diag_in_stolz(2.0, 12, 5))
    eigs = np.diag(T.entries)
    oracle = max(scalar_quotient(lam) for lam in eigs)
    val = squarefn.phi_m_norm(T, 1)
    assert val == pytest.approx(oracle, rel=1e-8)
    assert val <= 2.0  # bounded by the Stolz type


def test_phi_norm_jordan_against_dense_gram_oracle():
    # brute-force dense Gram summation with K = 2000 terms
    T = zoo.generate(zoo.jordan(0.5, 4, 0.2))
    for m in (1, 2):
        val = squarefn.phi_m_norm(T, m)
        B = np.linalg.matrix_power(np.eye(4) - T.entries, m)
        G = np.zeros((4, 4), dtype=complex)
        P = B.copy()
        for k in range(1, 2001):
            G += k ** (2 * m - 1) * (P.conj().T @ P)
            P = T.entries @ P
        oracle = math.sqrt(np.linalg.eigvalsh(G)[-1])
        assert val == pytest.approx(oracle, rel=1e-2)


def test_phi_dual_self_adjoint_diagonal():
    T = Operator(np.diag([0.5, -0.3]))
    assert squarefn.phi_m_dual_norm(T, 1) == pytest.approx(
        squarefn.phi_m_norm(T, 1), abs=1e-10
    )


def test_phi_dual_zero_operator():
    assert squarefn.phi_m_dual_norm(Operator(np.zeros((2, 2))), 1) == pytest.approx(1.0)


def test_phi_dual_p4_trace_duality_oracle():
    # maximize the trace pairing against MC-normalized sequences; the
    # aligned candidate makes the lower bound tight for diagonal T
    T = zoo.generate(zoo.diag_in_stolz(2.0, 4, 9, space_p=4.0))
    dual = squarefn.phi_m_dual_norm(T, 1, probe_count=48, seed=2)
    Tq = T.adjoint()
    K = 60
    best = 0.0
    for j in range(T.dim):
        xp = np.eye(T.dim)[j]
        seq = SqfSequence(Tq, xp, 1).entries(K)
        est = squarefn.gamma_dual_norm_estimate(seq, p=4.0, candidates=32, seed=5)
        best = max(best, est)
    assert best <= dual * 1.05
    assert best >= dual * 0.95


def test_lower_bound_scalar():
    T = Operator(np.diag([0.5]))
    assert squarefn.lower_bound_check(T, 1) == pytest.approx(2.0 / 3.0, abs=1e-10)


def test_lower_bound_two_point_diagonal():
    T = Operator(np.diag([0.5, 0.9]))
    oracle = min(scalar_quotient(0.5), scalar_quotient(0.9))
    assert squarefn.lower_bound_check(T, 1) == pytest.approx(oracle, rel=1e-6)


def test_lower_bound_vertex_kernel():
    # eigenvalue at 1: kernel vectors kill the sequence, infimum 0
    T = Operator(np.diag([1.0, 0.5]))
    assert squarefn.lower_bound_check(T, 1) == 0.0
    # after the ergodic splitting the restriction is bounded below
    P_ker, P_ran = diagnostics.ergodic_split(T)
    U, s, _ = np.linalg.svd(P_ran.entries)
    B = U[:, s > 0.5]  # orthonormal basis of the range
    T_ran = Operator(B.conj().T @ T.entries @ B)
    assert squarefn.lower_bound_check(T_ran, 1) > 0.1


def test_mc_agrees_with_exact(rng):
    for trial in range(5):
        T = random_diag_operator(rng, 5)
        x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        seq = SqfSequence(T, x, 1)
        exact = squarefn.gamma_norm(seq)
        mc = squarefn.gamma_norm(seq, method="gaussian_mc", seed=trial)
        assert abs(mc.value - exact.value) <= 3 * mc.stderr + mc.tail_bound


def test_duality_inequality(rng):
    # |sum <x'_k, x_k>| <= gamma'((x'_k)) gamma((x_k)) up to MC error
    p = 3.0
    K, dim = 8, 4
    xs = rng.standard_normal((K, dim)) + 1j * rng.standard_normal((K, dim))
    xps = rng.standard_normal((K, dim)) + 1j * rng.standard_normal((K, dim))
    pairing = abs(squarefn.dual_pair(xps, xs))
    gn = squarefn.gamma_norm(xs, method="gaussian_mc", space_p=p, seed=0).value
    gd = squarefn.gamma_dual_norm_estimate(xps, p=p, candidates=48, seed=1)
    # gd is a lower estimate of the dual norm, so pad generously
    assert pairing <= 1.25 * gd * gn + 1e-9 or pairing <= gd * gn * 1.25


def test_contraction_principle(rng):
    T = random_diag_operator(rng, 4)
    x = rng.standard_normal(4)
    seq = SqfSequence(T, x, 1).entries(40)
    base = squarefn.gamma_norm(seq, method="rademacher_mc", seed=9)
    alphas = rng.uniform(-1.0, 1.0, size=40)
    scaled = alphas[:, None] * seq
    after = squarefn.gamma_norm(scaled, method="rademacher_mc", seed=9)
    assert after.value <= base.value + 3 * (base.stderr + after.stderr) + 1e-12


def test_tail_bound_certificate_quality():
    # reported tail must dominate the actual discarded mass
    T = Operator(np.diag([0.8]))
    seq = SqfSequence(T, np.array([1.0]), 1)
    K, tail_sq = squarefn.choose_truncation(seq)
    lam = 0.8
    ks = np.arange(K + 1, K + 20000)
    actual = np.sum(ks * abs(1 - lam) ** 2 * abs(lam) ** (2 * (ks - 1)))
    assert tail_sq >= actual
    assert tail_sq <= 1e-2  # and it is genuinely small


def test_sequence_csv(tmp_path):
    T = Operator(np.diag([0.5, -0.2]))
    path = tmp_path / "seq.csv"
    squarefn.sequence_to_csv(SqfSequence(T, np.array([1.0, 1.0]), 1), 50, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,norm"
    assert len(lines) == 51
