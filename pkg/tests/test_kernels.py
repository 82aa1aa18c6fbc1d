import math

import numpy as np
import pytest

from riesz_clifford.clifford import Multivector
from riesz_clifford.kernels import (
    QuadratureRule,
    SingularityError,
    biorthogonality_residual,
    boundary_pairing,
    cauchy_integral_dense,
    cauchy_kernel,
    cauchy_kernel_dense,
    integrate_boundary,
    kernel_decomposition_residuals,
    sphere_area,
    sphere_rule,
    unit_sphere_area,
    w_dense,
    w_on_rule,
    w_poly,
    w_rational,
)
from riesz_clifford.polyspace import multi_indices_upto


def test_sphere_areas():
    assert unit_sphere_area(1) == pytest.approx(2 * math.pi)
    assert unit_sphere_area(2) == pytest.approx(4 * math.pi)
    assert unit_sphere_area(3) == pytest.approx(2 * math.pi**2)
    assert sphere_area(2, 2.0) == pytest.approx(16 * math.pi)


def test_cauchy_kernel_values():
    assert cauchy_kernel([1.0, 0.0, 0.0]).allclose(Multivector.scalar(2, 1 / (4 * math.pi)))
    assert cauchy_kernel([0.0, 2.0, 0.0]).allclose(Multivector.blade(2, (1,), -1 / (16 * math.pi)))
    with pytest.raises(SingularityError):
        cauchy_kernel([0.0, 0.0, 0.0])
    with pytest.raises(SingularityError):
        w_poly((1, 0), [0.0, 0.0, 0.0])


def test_dense_kernel_matches_pointwise(rng):
    pts = rng.standard_normal((6, 4))
    dense = cauchy_kernel_dense(pts)
    for i, p in enumerate(pts):
        assert np.allclose(dense[i], cauchy_kernel(p).to_dense())
    assert np.allclose(w_dense((0, 0, 0), pts), dense)


@pytest.mark.parametrize("n", [2, 3])
def test_kernels_are_hyperholomorphic(n):
    for alpha in multi_indices_upto(n, 3):
        assert w_rational(alpha).dirac().is_zero()


def test_w_alpha_is_scaled_derivative_of_kernel(rng):
    # central differences of E as an independent oracle for W_alpha = d^alpha E / alpha!
    y = np.array([0.4, -0.7, 0.9])
    h = 1e-4
    for j, alpha in ((1, (1, 0)), (2, (0, 1))):
        step = np.zeros(3)
        step[j] = h
        fd = (cauchy_kernel(y + step).to_dense() - cauchy_kernel(y - step).to_dense()) / (2 * h)
        assert np.allclose(w_poly(alpha, y).to_dense(), fd, atol=1e-8)
    step = np.array([0, h, 0])
    second = (cauchy_kernel(y + step).to_dense() - 2 * cauchy_kernel(y).to_dense()
              + cauchy_kernel(y - step).to_dense()) / h**2
    assert np.allclose(w_poly((2, 0), y).to_dense(), second / 2, atol=1e-5)


def test_w_homogeneity(rng):
    y = rng.standard_normal(3)
    for alpha in ((1, 0), (1, 2), (0, 3)):
        k = sum(alpha)
        assert w_poly(alpha, 2.5 * y).allclose(w_poly(alpha, y) * 2.5 ** (-2 - k), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_rule_moments(n):
    r = 1.7
    rule = sphere_rule(n, r, 12)
    assert rule.weights.sum() == pytest.approx(sphere_area(n, r), rel=1e-13)
    assert np.allclose(np.linalg.norm(rule.nodes, axis=1), r)
    assert np.allclose(np.linalg.norm(rule.normals, axis=1), 1.0)
    # int y_0^2 dS = r^2 |S^n(r)| / (n + 1); int y_0^4 dS = 3 r^4 |S^n(r)| / ((n+1)(n+3))
    y0 = rule.nodes[:, 0]
    assert rule.weights @ y0**2 == pytest.approx(r**2 * sphere_area(n, r) / (n + 1), rel=1e-12)
    assert rule.weights @ y0**4 == pytest.approx(3 * r**4 * sphere_area(n, r) / ((n + 1) * (n + 3)), rel=1e-12)
    assert abs(rule.weights @ rule.nodes[:, -1] ** 3) < 1e-12


def test_sphere_rule_rejects_bad_input():
    with pytest.raises(ValueError):
        sphere_rule(4, 1.0, 8)
    with pytest.raises(ValueError):
        sphere_rule(2, -1.0, 8)


def test_quadrature_rule_roundtrip():
    rule = sphere_rule(2, 1.0, 4)
    back = QuadratureRule.from_dict(rule.to_dict())
    assert np.array_equal(back.nodes, rule.nodes) and np.array_equal(back.weights, rule.weights)


def test_cauchy_reproduction_interior_and_exterior(rng):
    rule = sphere_rule(2, 1.0, 32)
    one = np.zeros((len(rule), 4))
    one[:, 0] = 1.0
    for _ in range(5):
        x = rng.standard_normal(3)
        x *= 0.5 * rng.random() / np.linalg.norm(x)
        val = cauchy_integral_dense(rule, x, one)
        assert np.allclose(val, [1, 0, 0, 0], atol=1e-10)
    val = cauchy_integral_dense(rule, np.array([0.0, 2.5, 0.0]), one)
    assert np.allclose(val, 0, atol=1e-10)


def test_cauchy_reproduces_v_alpha():
    rule = sphere_rule(2, 1.0, 32)
    from riesz_clifford.polyspace import v_polynomial
    f = v_polynomial((2, 1))
    x = np.array([0.1, -0.2, 0.3])
    val = cauchy_integral_dense(rule, x, f.evaluate_dense(rule.nodes))
    assert np.allclose(val, f(x).to_dense(), atol=1e-10)


def test_integrate_boundary_matches_dense():
    rule = sphere_rule(2, 1.0, 6)
    slow = integrate_boundary(rule, lambda y, ds: cauchy_kernel(y) * ds)
    assert slow.allclose(Multivector.scalar(2, 1.0), atol=1e-12)


def test_biorthogonality_small():
    assert boundary_pairing((1, 0), (1, 0), sphere_rule(2, 1.0, 16)).allclose(Multivector.scalar(2, 1.0), atol=1e-12)
    assert boundary_pairing((0, 1), (1, 0), sphere_rule(2, 1.0, 16)).norm_inf() < 1e-12
    assert biorthogonality_residual(2, 2, 16) < 1e-10
    assert biorthogonality_residual(2, 2, 16, r=2.0) < 1e-10


def test_w_on_rule_scaling():
    rule = sphere_rule(2, 2.0, 8)
    assert np.allclose(w_on_rule((1, 1), rule), w_dense((1, 1), rule.nodes))


def test_kernel_decomposition_converges():
    res = kernel_decomposition_residuals([0.3, 0.0, 0.0], [1.0, 0.0, 0.0], 8)
    # on the e0 axis E(y - x) = 1 / (4 pi 0.7^2) and the degree-0 term is 1 / (4 pi)
    assert res[0] == pytest.approx((1 / 0.49 - 1) / (4 * math.pi), rel=1e-12)
    # regression value
    assert res[8] == pytest.approx(2.33e-5, rel=1e-2)
    assert np.all(np.diff(res) < 0)
    with pytest.raises(ValueError):
        kernel_decomposition_residuals([1.0, 0.0, 0.0], [0.5, 0.0, 0.0], 2)


def test_kernel_decomposition_small_cases():
    assert kernel_decomposition_residuals([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], 0)[0] == 0.0
    assert kernel_decomposition_residuals([0.1, 0.0, 0.0], [1.0, 0.0, 0.0], 8)[-1] < 1e-6


def test_cauchy_kernel_homogeneity(rng):
    x = rng.standard_normal(4)
    assert cauchy_kernel(3.0 * x).allclose(cauchy_kernel(x) * 3.0**-3, atol=1e-14)
