#!/usr/bin/env python3
"""Walkthrough: classifying the operator zoo.

The resolvent condition sup ||(lambda-1)R(lambda,T)|| < inf is equivalent
to power-boundedness plus the discrete derivative bound; dropping either
condition breaks it.  The zoo exhibits each regime and the diagnostics
report the sampled constants and growth trends.
"""

import math

from rittlab import diagnostics, zoo

CASES = [
    ("well-inside diagonal", zoo.diag_in_stolz(2.0, 16, 7)),
    ("quarter-turn rotation", zoo.rotation(math.pi / 2)),
    ("tangential average", zoo.tangential_average(32)),
    ("Jordan block", zoo.jordan(0.5, 6, 0.4)),
]

for name, spec in CASES:
    T = zoo.generate(spec)
    rep = diagnostics.diagnose(T, N=96, K=128)
    st = "inf" if math.isinf(rep.stolz_type_spec) else f"{rep.stolz_type_spec:.3f}"
    print(f"{name:22s} ritt~{rep.ritt_constant:9.3f}{'(growing)' if rep.ritt_growth_flag else '         '}"
          f" pb={rep.power_bound:8.3f} dd_slope={rep.dd_trend:+.3f}"
          f" stolz={st:>8s}  -> {rep.classification}")

print("\nR-bound estimation on the power family of the diagonal case:")
T = zoo.generate(zoo.diag_in_stolz(2.0, 16, 7))
fam = diagnostics._power_family(T, 12)
for kind in ("rademacher", "gaussian"):
    est = diagnostics.rbound_estimate(fam, trials=36, sign_kind=kind, seed=0)
    print(f"  {kind:10s}: {est.value:.6f} +- {est.stderr:.2e} "
          f"({est.samples} samples)")

print("\nErgodic splitting when the spectrum touches z = 1:")
import numpy as np
from rittlab import numkernel

T1 = numkernel.Operator(np.diag([1.0, 0.6, -0.2]))
P_ker, P_ran = diagnostics.ergodic_split(T1)
print("  P_ker diag:", np.round(np.diag(P_ker.entries).real, 6))
print("  P_ran diag:", np.round(np.diag(P_ran.entries).real, 6))
