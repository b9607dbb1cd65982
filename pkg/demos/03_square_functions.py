#!/usr/bin/env python3
"""Walkthrough: square-function norms and their duals.

The m-th square function sends x to (k^(m-1/2) T^(k-1)(I-T)^m x)_k,
measured in the Gaussian-sum norm.  On the Hilbert context the norm has
a closed Gram form; on l^p it is estimated by Monte Carlo with batch
error bars, and the dual map is evaluated on the dual exponent.
"""

import numpy as np

from rittlab import numkernel, squarefn, zoo
from rittlab.squarefn import SqfSequence

print("== scalar sanity: T = diag(1/2), m = 1 ==")
T = numkernel.Operator(np.diag([0.5]))
print(f"  phi_1 norm  : {squarefn.phi_m_norm(T, 1):.12f}  (closed form 2/3)")
print(f"  lower bound : {squarefn.lower_bound_check(T, 1):.12f}")

print("\n== exact vs Monte Carlo gamma norms ==")
D = zoo.generate(zoo.diag_in_stolz(2.0, 8, 3))
x = np.ones(8) / np.sqrt(8)
seq = SqfSequence(D, x, 1)
exact = squarefn.gamma_norm(seq)
mc = squarefn.gamma_norm(seq, method="gaussian_mc", seed=1)
print(f"  hilbert_exact: {exact.value:.8f} (tail bound {exact.tail_bound:.1e}, K={exact.truncation_K})")
print(f"  gaussian_mc  : {mc.value:.8f} +- {mc.stderr:.1e}")

print("\n== norms across m and the dual map ==")
for m in (1, 2, 3):
    up = squarefn.phi_m_norm(D, m)
    lo = squarefn.lower_bound_check(D, m)
    print(f"  m={m}: upper {up:.6f}, lower {lo:.6f}")

P4 = zoo.generate(zoo.diag_in_stolz(2.0, 6, 11, space_p=4.0))
print(f"\n  l^4 context: phi_1 ~ {squarefn.phi_m_norm(P4, 1, probe_count=16):.6f} "
      f"(probe maximization), dual ~ {squarefn.phi_m_dual_norm(P4, 1, probe_count=16):.6f} "
      "(adjoint on l^{4/3})")

print("\n== decay of the sequence entries (CSV-ready) ==")
ent = seq.entries(12)
for k in (1, 2, 4, 8, 12):
    print(f"  k={k:3d}  ||v_k|| = {np.linalg.norm(ent[k-1]):.6e}")
