#!/usr/bin/env python3
"""Walkthrough: auditing the series identities with partial-sum oracles.

Every identity is summed with closed-form tail bounds; displayed
constants are claims under test.  Two of them fail the audit as printed
and the checkers record the corrected forms the sums actually satisfy.
"""

import math

from rittlab import holo, identities

print("== the weighted geometric series ==")
for n in (0, 2, 5):
    v = identities.lemma_identity(0.3 + 0.2j, n, 300)
    print(f"  rising convention, n={n}: sum = {v:.12f} (identity value 1)")
print("  printed-binomial variant evaluates to u^(n-1):")
for n in (2, 3):
    v = identities.lemma_identity(0.4, n, 300, convention="printed")
    print(f"    n={n}: sum = {v.real:.10f}  vs u^(n-1) = {0.4 ** (n-1):.10f}")

print("\n== rising-factorial generating identity ==")
lhs, rhs, tail = identities.rising_product_identity(0.5, 3, 300)
print(f"  m=3, u=0.5: lhs {lhs.real:.10f}  rhs {rhs.real:.10f}  tail {tail:.1e}")

print("\n== pairing-constant probe: the claimed (m1+m2)! fails off z=0 ==")
for z in (0.0, 0.25, 0.5):
    v, _ = identities.pairing_constant_probe(z, 1, 1, 2000)
    print(f"  z={z}: sum = {v:.8f}   claimed 2! = 2   [1/(1+z)^4 = {1/(1+z)**4:.8f}]")

print("\n== representation-ratio audit ==")
f1 = holo.polynomial([1.0, 0.5, 0.25], label="poly")
f2 = holo.cayley()
for z in (0.1, 0.3, 0.5):
    r1 = identities.representation_ratio(z, f1, 1, 1, 800)
    r2 = identities.representation_ratio(z, f2, 1, 1, 800)
    cf = identities.representation_ratio_closed_form(z, 1, 1)
    print(f"  z={z}: ratio {r1.real:.10f}  (f-gap {abs(r1-r2):.1e}, "
          f"closed form {cf.real:.10f})")
print("  -> the printed series returns f(z) * (1-(1-z^3)^(m+1))/((m+1)z^3), not f(z)")

print("\n== even-power splitting carries 2^(m-2) ==")
for m in (2, 3, 4):
    r = identities.step2_ratio_probe(0.4, 3, m, 3000)
    print(f"  m={m}: lhs/rhs = {r.real:.8f}  (2^(m-2) = {2.0 ** (m-2):.1f})")

print("\n== multiplier sums stay uniformly bounded ==")
for m in (3, 4):
    sums, _ = identities.multiplier_bounds(50, m)
    print(f"  m={m}: sup = {max(sums):.6f} at n={list(sums).index(max(sums))+1}, "
          f"n=50 value {sums[-1]:.6f}  (Basel: {math.pi**2/6:.6f})")

print("\n== weighted arc integrals are uniform in k ==")
for k in (1, 10, 100, 1000, 10000):
    print(f"  k={k:6d}: {identities.contour_l1_bound(2.0, k):.8f}")
print("  (the k -> inf limit is 2*theta = 4)")
