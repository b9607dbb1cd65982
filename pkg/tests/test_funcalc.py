import math

import numpy as np
import pytest

from rittlab import funcalc, holo, numkernel, zoo
from rittlab.errors import (
    IllConditioned,
    NotAdmissible,
    NotRegularizable,
    SpectrumOutsideContour,
)
from rittlab.numkernel import Operator, operator_norm

from conftest import random_diag_operator


def op_err(A, B):
    return float(np.max(np.abs(A - B)))


def test_contour_polynomial_direct():
    T = Operator(np.diag([0.5, -0.2 + 0.1j]))
    f = holo.polynomial([0.0, 1.0, -1.0], label="z(1-z)")
    res = funcalc.calc_contour(T, f, 2.0, tol=1e-10)
    direct = T.entries @ (np.eye(2) - T.entries)
    assert op_err(res.value.entries, direct) <= 1e-8
    assert res.method == "contour"
    assert res.quad_error_est <= 1e-10


def test_contour_jordan_polynomial_oracle():
    # direct matrix product oracle for z^10 (1-z)^2
    T = zoo.generate(zoo.jordan(0.5, 4, 0.2))
    coeffs = np.polynomial.polynomial.polymul(
        np.polynomial.polynomial.polypow([0.0, 1.0], 10), [1.0, -2.0, 1.0]
    )
    f = holo.polynomial(coeffs)
    res = funcalc.calc_contour(T, f, 2.0, tol=1e-10)
    P = np.linalg.matrix_power(T.entries, 10)
    direct = P @ np.linalg.matrix_power(np.eye(4) - T.entries, 2)
    assert op_err(res.value.entries, direct) <= 1e-8


def test_contour_cayley_rational_oracle():
    T = zoo.generate(zoo.diag_in_stolz(2.0, 8, 3))
    res = funcalc.calc_contour(T, holo.cayley(), 2.0, tol=1e-10)
    direct = (np.eye(8) - T.entries) @ np.linalg.inv(np.eye(8) + T.entries)
    assert op_err(res.value.entries, direct) <= 1e-8


def test_contour_spectrum_outside_raises():
    R = zoo.generate(zoo.rotation(math.pi / 2))
    with pytest.raises(SpectrumOutsideContour):
        funcalc.calc_contour(R, holo.cayley(), 2.0)


def test_contour_vertex_spectrum_raises():
    T = Operator(np.diag([1.0, 0.2]))
    with pytest.raises(SpectrumOutsideContour):
        funcalc.calc_contour(T, holo.cayley(), 2.0)


def test_contour_not_admissible_raises():
    T = Operator(np.diag([0.5, -0.2]))
    with pytest.raises(NotAdmissible):
        funcalc.calc_contour(T, holo.constant(1.0), 2.0)


def test_regularized_unitality():
    T = Operator(np.diag([0.5, -0.2 + 0.1j]))
    res = funcalc.calc_regularized(T, holo.constant(1.0), 2.0, tol=1e-10)
    assert op_err(res.value.entries, np.eye(2)) <= 1e-8


def test_regularized_identity_function():
    T = zoo.generate(zoo.diag_in_stolz(2.0, 6, 1))
    res = funcalc.calc_regularized(T, holo.monomial(1), 2.0, tol=1e-10)
    assert op_err(res.value.entries, T.entries) <= 1e-8


def test_regularized_scalar_oracle():
    T = Operator(np.diag([0.5, -0.2]))
    res = funcalc.calc_regularized(T, holo.rational([1.0], [2.0, -1.0]), 2.0, tol=1e-10)
    assert op_err(res.value.entries, np.diag([1.0 / 1.5, 1.0 / 2.2])) <= 1e-8


def test_regularized_rejects_vertex():
    with pytest.raises((NotRegularizable, SpectrumOutsideContour)):
        funcalc.calc_regularized(Operator(np.eye(2)), holo.monomial(1), 2.0)


def test_eigen_oracle_square():
    T = Operator(np.diag([0.5, 0.1]))
    res = funcalc.calc_eigen_oracle(T, holo.monomial(2))
    assert op_err(res.value.entries, np.diag([0.25, 0.01])) <= 1e-12


def test_eigen_oracle_cayley_at_zero():
    T = Operator(np.zeros((3, 3)))
    res = funcalc.calc_eigen_oracle(T, holo.cayley())
    assert op_err(res.value.entries, np.eye(3)) <= 1e-12


def test_eigen_oracle_ill_conditioned():
    T = zoo.generate(zoo.jordan(0.5, 6, 0.2))
    with pytest.raises(IllConditioned):
        funcalc.calc_eigen_oracle(T, holo.monomial(2))


def test_cross_method_agreement(rng):
    # contour vs eigen oracle on a random normal operator; the test
    # function carries the (1-z) decay the contour class requires
    Q, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    D = np.diag(0.6 * rng.uniform(size=6) * np.exp(1j * rng.uniform(-0.5, 0.5, 6)))
    T = Operator(Q @ D @ Q.conj().T)
    f = holo.polynomial(
        np.polynomial.polynomial.polymul([0.1, 0.4, -0.3, 0.2], [1.0, -1.0])
    )
    a = funcalc.calc_contour(T, f, 2.5, tol=1e-10)
    b = funcalc.calc_eigen_oracle(T, f)
    assert op_err(a.value.entries, b.value.entries) <= 1e-7


def test_homomorphism_property():
    T = Operator(np.diag([0.5, -0.2 + 0.1j]))
    f = holo.polynomial([0.0, 1.0, -1.0])
    g = holo.polynomial([1.0, -1.0])
    tol = 1e-10
    fg = funcalc.calc_contour(T, f * g, 2.0, tol=tol)
    fa = funcalc.calc_contour(T, f, 2.0, tol=tol)
    ga = funcalc.calc_contour(T, g, 2.0, tol=tol)
    prod = fa.value.entries @ ga.value.entries
    budget = 10 * (fg.quad_error_est + fa.quad_error_est + ga.quad_error_est) + 1e-12
    assert op_err(fg.value.entries, prod) <= max(budget, 1e-9)


def test_contour_independence():
    T = Operator(np.diag([0.3, -0.1]))
    f = holo.polynomial([0.0, 2.0, -2.0])
    tol = 1e-10
    a = funcalc.calc_contour(T, f, 1.8, tol=tol)
    b = funcalc.calc_contour(T, f, 2.6, tol=tol)
    assert op_err(a.value.entries, b.value.entries) <= 10 * tol


def test_multi_matches_single():
    T = zoo.generate(zoo.diag_in_stolz(2.0, 5, 2))
    fns = [holo.cayley(), holo.polynomial([0.0, 1.0, -1.0])]
    multi = funcalc.calc_contour_multi(T, fns, 2.0, tol=1e-10)
    for f, r in zip(fns, multi):
        single = funcalc.calc_contour(T, f, 2.0, tol=1e-10)
        assert op_err(r.value.entries, single.value.entries) <= 1e-13


def test_bounded_pointwise_convergence():
    # f_n(z) = z^n f(z) with f = 1: ||T^n e(T) y|| -> 0 for spectral radius < 1
    T = zoo.generate(zoo.diag_in_stolz(2.0, 6, 4))
    eT = funcalc.cayley_of(T)
    rng = np.random.default_rng(0)
    y = rng.standard_normal(6)
    v = eT.entries @ y
    norms = []
    for n in (1, 4, 16, 48):
        res = funcalc.calc_regularized(T, holo.monomial(n), 2.0, tol=1e-9)
        norms.append(np.linalg.norm(res.value.entries @ v))
    assert norms[-1] <= 0.05 * norms[0]


def test_default_theta_geometric_mean():
    T = Operator(np.diag([0.0]))  # spectral type 1 exactly
    th = funcalc.default_theta(T, 4.0)
    assert 1.0 < th < 4.0
    with pytest.raises(SpectrumOutsideContour):
        funcalc.default_theta(Operator(np.eye(2)), 4.0)


def test_hinf_normal_diagonal_is_one():
    T = zoo.generate(zoo.diag_in_stolz(2.0, 8, 7))
    est = funcalc.hinf_constant_estimate(T, nu=3.0, budget=6, seed=0)
    assert 1.0 - 1e-9 <= est <= 1.02


def test_hinf_jordan_stable_under_budget_doubling():
    T = zoo.generate(zoo.jordan(0.5, 8, 0.3))
    a = funcalc.hinf_constant_estimate(T, nu=3.0, budget=6, seed=0)
    b = funcalc.hinf_constant_estimate(T, nu=3.0, budget=12, seed=0)
    assert a >= 1.0 - 1e-9
    assert abs(a - b) <= 0.10 * max(a, b)
