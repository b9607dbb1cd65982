"""Acceptance suite: one test per exit criterion, with a PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here, nothing is deferred.
"""

import contextlib
import json
import math
import time

import numpy as np
import pytest

from rittlab import (
    basis,
    diagnostics,
    experiments,
    funcalc,
    holo,
    identities,
    numkernel,
    squarefn,
    stolz,
    zoo,
)
from rittlab.squarefn import SqfSequence


@contextlib.contextmanager
def criterion(num, name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num} ({name}): FAIL")
        raise
    print(f"ACCEPTANCE {num} ({name}): PASS")


def test_criterion_01_cauchy_probe():
    with criterion(1, "Cauchy probe"):
        t0 = time.perf_counter()
        c = stolz.make_contour(2.0, 1e-10)
        for z0 in (0.0, -0.2, 0.3 + 0.1j):
            assert abs(stolz.cauchy_probe(c, z0) - 2j * math.pi) <= 1e-10
        assert time.perf_counter() - t0 < 1.0


def _admissible_test_functions():
    fns = [
        holo.polynomial([0.0, 1.0, -1.0], label="z(1-z)"),
        holo.polynomial([0.0, 0.0, 1.0, -1.0], label="z^2(1-z)"),
        holo.polynomial(
            np.polynomial.polynomial.polymul(
                np.polynomial.polynomial.polypow([0.0, 1.0], 10), [1.0, -2.0, 1.0]
            ),
            label="z^10(1-z)^2",
        ),
        holo.cayley(),
        holo.polynomial([1.0, -2.0, 1.0], label="(1-z)^2"),
        holo.polynomial([0.0, 0.0, 3.0, -3.0], label="3z^2(1-z)"),
        holo.rational([1.0, -1.0], [2.0, -1.0], label="(1-z)/(2-z)"),
        holo.polynomial([1.0, -1.0], label="1-z"),
        funcalc._pairing_fn(1),
        funcalc._pairing_fn(3),
    ]
    assert len(fns) == 10
    return fns


def test_criterion_02_calculus_agreement():
    with criterion(2, "contour vs eigendecomposition"):
        t0 = time.perf_counter()
        fns = _admissible_test_functions()
        rng = np.random.default_rng(0)
        specs = []
        for i in range(20):
            n = int(rng.integers(4, 33))
            if i % 2 == 0:
                specs.append(zoo.diag_in_stolz(2.0, n, 100 + i))
            else:
                specs.append(zoo.conjugated(zoo.diag_in_stolz(2.0, n, 100 + i),
                                            cond_target=5.0, seed=i))
        worst = 0.0
        for spec in specs:
            T = zoo.generate(spec)
            results = funcalc.calc_contour_multi(T, fns, 2.0, tol=1e-9, check=False)
            for f, res in zip(fns, results):
                oracle = funcalc.calc_eigen_oracle(T, f)
                err = numkernel.operator_norm(
                    numkernel.Operator(res.value.entries - oracle.value.entries))
                worst = max(worst, err)
        elapsed = time.perf_counter() - t0
        assert worst <= 1e-7, f"worst disagreement {worst}"
        assert elapsed < 30.0, f"took {elapsed:.1f}s"


def test_criterion_03_lemma_identity():
    with criterion(3, "geometric-series lemma"):
        rng = np.random.default_rng(3)
        K = 500
        for n in range(0, 7):
            for _ in range(50):
                r = 0.9 * math.sqrt(rng.uniform())
                ang = rng.uniform(0.0, 2.0 * math.pi)
                u = r * complex(math.cos(ang), math.sin(ang))
                value, tail = identities.lemma_partial_sum(u, n, K)
                assert abs(value - 1.0) <= max(tail, 5e-14)
        for m in (1, 2, 3, 4):
            for _ in range(50):
                r = 0.9 * math.sqrt(rng.uniform())
                ang = rng.uniform(0.0, 2.0 * math.pi)
                u = r * complex(math.cos(ang), math.sin(ang))
                lhs, rhs, tail = identities.rising_product_identity(u, m, K)
                assert abs(lhs - rhs) <= max(tail, 5e-14 * abs(rhs))


def test_criterion_04_wirtinger_law():
    with criterion(4, "Wirtinger asymptotics"):
        ratio = basis.polylog_half(0.999) * 0.001 ** 1.5 / basis.GAMMA_3_HALVES
        assert 0.999 <= ratio <= 1.001
        exponent = experiments.canonical_blowup_exponent(2.0, d_range=(1e-3, 1e-1))
        assert abs(exponent - 0.5) <= 0.05


def test_criterion_05_basis_uniform_bound():
    with criterion(5, "pairing-basis uniform l1 bound"):
        dom = stolz.StolzDomain(2.0)
        grid = basis.make_stolz_grid(2.0, 500, 1e-2)
        assert len(grid) == 500
        tables, skipped = basis.pairing_sweep(dom, 1, "riesz", grid)
        assert not skipped
        sup1 = max(t.l1 for t in tables)
        refined = basis.make_stolz_grid(2.0, 1000, 5e-3)
        tables2, _ = basis.pairing_sweep(dom, 1, "riesz", refined)
        sup2 = max(t.l1 for t in tables2)
        assert math.isfinite(sup1)
        assert abs(sup1 - sup2) <= 0.05 * max(sup1, sup2)

        canon_near = basis.pairing_sweep(
            dom, 1, "canonical", basis.make_stolz_grid(2.0, 500, 1e-2))[0]
        canon_nearer = basis.pairing_sweep(
            dom, 1, "canonical", basis.make_stolz_grid(2.0, 500, 1e-4))[0]
        sup_c1 = max(t.l1 for t in canon_near)
        sup_c2 = max(t.l1 for t in canon_nearer)
        assert sup_c2 > 5.0 * sup_c1

        for z in (0.3, -0.25 + 0.2j, 0.55, 0.2 - 0.35j):
            table = basis.pairing_table(z, 1, "riesz")
            for n in range(1, 8):
                assert abs(table.values[n - 1] - basis.closed_form_pairings(z, n)) <= 1e-10


def test_criterion_06_square_function_closed_form():
    with criterion(6, "square-function closed forms"):
        T = numkernel.Operator(np.diag([0.5]))
        assert squarefn.phi_m_norm(T, 1) == pytest.approx(2.0 / 3.0, abs=1e-10)

        rng = np.random.default_rng(6)
        for i in range(20):
            n = int(rng.integers(2, 12))
            D = zoo.generate(zoo.diag_in_stolz(2.0, n, 600 + i))
            assert squarefn.phi_m_norm(D, 1) <= 2.0

        for i in range(20):
            n = int(rng.integers(2, 8))
            D = zoo.generate(zoo.diag_in_stolz(2.0, n, 700 + i))
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            seq = SqfSequence(D, x, 1)
            exact = squarefn.gamma_norm(seq)
            mc = squarefn.gamma_norm(seq, method="gaussian_mc", seed=i)
            assert abs(mc.value - exact.value) <= 3 * mc.stderr + mc.tail_bound


def test_criterion_07_ritt_dichotomy():
    with criterion(7, "power vs discrete-derivative dichotomy"):
        R = zoo.generate(zoo.rotation(math.pi / 2))
        pb, _ = diagnostics.power_bound(R, 64)
        assert pb == pytest.approx(1.0, abs=1e-12)
        K = 256
        ddv, _ = diagnostics.dd_bound(R, K)
        assert ddv / K == pytest.approx(math.sqrt(2.0), rel=1e-2)

        D = zoo.generate(zoo.diag_in_stolz(2.0, 16, 7))
        terms = diagnostics.dd_terms(D, 256)
        assert diagnostics.dd_trend_slope(terms) <= 0.05

        TA = zoo.generate(zoo.tangential_average(32))
        assert math.isinf(diagnostics.stolz_type_of_spectrum(TA))


def test_criterion_08_hilbert_rbound_law():
    with criterion(8, "Hilbert R-bound law"):
        fam = [numkernel.Operator(np.eye(3)), numkernel.Operator(2.0 * np.eye(3))]
        est = diagnostics.rbound_estimate(fam, trials=24, seed=8)
        assert abs(est.value - 2.0) <= 3.0 * est.stderr + 1e-9

        rng = np.random.default_rng(8)
        for i in range(10):
            n = int(rng.integers(2, 6))
            ops = []
            for _ in range(3):
                M = 0.5 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
                ops.append(numkernel.Operator(M))
            r = diagnostics.rbound_estimate(ops, trials=18, seed=80 + i,
                                            sign_kind="rademacher")
            g = diagnostics.rbound_estimate(ops, trials=18, seed=80 + i,
                                            sign_kind="gaussian")
            assert r.value <= math.sqrt(math.pi / 2.0) * g.value \
                + 3.0 * (r.stderr + g.stderr) + 1e-9


def test_criterion_09_contour_l1_uniformity():
    with criterion(9, "contour L1 uniformity in k"):
        vals = {k: identities.contour_l1_bound(2.0, k) for k in (1, 10, 100, 1000, 10000)}
        big = [v for k, v in vals.items() if k >= 10]
        assert max(big) / min(big) <= 2.0


def test_criterion_10_identity_audit():
    with criterion(10, "printed-constant audit"):
        f_pair = (holo.polynomial([1.0, 0.5, 0.25], label="p"), holo.cayley())
        rep_a = identities.audit_representation(f_pair, K=600)
        rep_b = identities.audit_representation(f_pair, K=600)
        assert rep_a.to_dict() == rep_b.to_dict()  # deterministic reproduction
        assert rep_a.details["max_f_dependence"] <= 1e-12

        pc_a = identities.audit_pairing_constant(K=2000)
        pc_b = identities.audit_pairing_constant(K=2000)
        assert pc_a.to_dict() == pc_b.to_dict()
        assert pc_a.max_abs_deviation > 0.5  # the printed m! fails off z=0
        # and the confirmed closed form explains the ratio
        z = 0.5
        ratio = identities.representation_ratio(z, f_pair[0], 1, 1, 600)
        assert abs(ratio - identities.representation_ratio_closed_form(z, 1, 1)) <= 1e-10


def test_criterion_11_determinism():
    with criterion(11, "byte-identical reports"):
        budgets = {"power_horizon": 16, "dd_horizon": 24, "hinf_budget": 3,
                   "rbound_trials": 9, "rbound_family": 4}
        specs = [zoo.diag_in_stolz(2.0, 6, 3), zoo.rotation(0.7)]
        a = experiments.report_json(
            experiments.run_equivalence(specs, nu=3.0, seed=11, budgets=budgets, threads=1), 11)
        b = experiments.report_json(
            experiments.run_equivalence(specs, nu=3.0, seed=11, budgets=budgets, threads=4), 11)
        assert a.encode() == b.encode()
        json.loads(a)  # and the report is valid JSON
