#!/usr/bin/env python3
"""Walkthrough: the equivalence table.

For operators with a bounded calculus all estimates are finite together
(calculus constant, square functions, duals, R-bounds); operators
violating the resolvent condition show divergence flags in at least one
column.  Reports are byte-deterministic for a fixed seed regardless of
thread count.
"""

import math

from rittlab import experiments, zoo

specs = [
    zoo.diag_in_stolz(2.0, 12, 7),
    zoo.conjugated(zoo.diag_in_stolz(2.0, 12, 7), cond_target=10.0, seed=1),
    zoo.rotation(math.pi / 2),
    zoo.tangential_average(16),
]
budgets = {"power_horizon": 48, "dd_horizon": 64, "hinf_budget": 6,
           "rbound_trials": 24, "rbound_family": 8}
rows = experiments.run_equivalence(specs, nu=3.0, seed=0, budgets=budgets)


def fmt(v):
    return f"{v:9.4f}" if isinstance(v, float) else f"{v:>9s}"[:9]


header = f"{'operator':>22s} {'stolz':>9s} {'hinf':>9s} {'phi1':>9s} {'phi1*':>9s} " \
         f"{'phi2':>9s} {'rb_pow':>9s} {'rb_dd':>9s}  class"
print(header)
for r in rows:
    print(f"{r.operator_id:>22s} {fmt(r.stolz_type)} {fmt(r.hinf_estimate)} "
          f"{fmt(r.phi1_norm)} {fmt(r.phi1_dual_norm)} {fmt(r.phi2_norm)} "
          f"{fmt(r.rbound_powers)} {fmt(r.rbound_dd)}  {r.classification}")
    if r.flags:
        print(f"{'':>22s} flags: {', '.join(r.flags)}")

print("\nDeterminism: rerunning with the same seed reproduces the JSON byte for byte.")
a = experiments.report_json(rows, 0)
b = experiments.report_json(
    experiments.run_equivalence(specs, nu=3.0, seed=0, budgets=budgets, threads=2), 0)
print("  identical:", a == b)
