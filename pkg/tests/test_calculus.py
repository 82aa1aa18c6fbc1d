import warnings

import numpy as np
import pytest

from riesz_clifford.calculus import (
    ConvergenceWarning,
    OperatorKernelConfig,
    SpectralBoundError,
    calculus_integral,
    calculus_taylor,
    calculus_taylor_series,
    commuting_oracle,
    operator_cauchy_kernel,
    relative_difference,
    resolvent_probe,
    spectral_radius_bound,
    vanishing_check,
)
from riesz_clifford.clifford import Multivector
from riesz_clifford.kernels import cauchy_kernel
from riesz_clifford.polyspace import HyperPolynomial, OperatorTuple
from riesz_clifford.polyspace import symmetric_product

from conftest import hermitian, random_commuting_tuple


@pytest.fixture
def pair(rng):
    return OperatorTuple([hermitian(rng), hermitian(rng)])


def test_spectral_radius_bound():
    T = [np.diag([1.0, -3.0]), np.diag([2.0, 0.5])]
    assert spectral_radius_bound(T) == pytest.approx(3.0)


def test_config_validation():
    with pytest.raises(ValueError):
        OperatorKernelConfig(radius=-1.0)
    with pytest.raises(ValueError):
        OperatorKernelConfig(quad_order=1)
    assert OperatorKernelConfig().resolve_radius(0.0) == 1.0
    assert OperatorKernelConfig().resolve_radius(1.5) == 3.0


def test_scalar_kernel_series_is_shifted_cauchy_kernel():
    # 1x1 operators commute; the series is the Taylor expansion of E(y + (0, t))
    t = [0.3, -0.2]
    T = [np.array([[t[0]]]), np.array([[t[1]]])]
    y = np.array([2.0, 0.1, 0.4])
    res = operator_cauchy_kernel(y, T, 30)
    expected = cauchy_kernel(y + np.array([0.0, *t]))
    got = Multivector.from_dense(res.value.to_dense(shape=(1, 1), dtype=complex)[:, 0, 0].real, 2)
    assert got.allclose(expected, atol=1e-13)


def test_kernel_series_diverges_just_outside_norm_bound():
    # |T| = 1 but the scalar series needs |y| > |t| = sqrt(2)
    T = [np.eye(1), np.eye(1)]
    assert resolvent_probe([1.2, 0.0, 0.0], T, J=16).verdict == "diverging"
    assert resolvent_probe([1.6, 0.0, 0.0], T, J=16).verdict == "converging"
    with pytest.warns(ConvergenceWarning):
        operator_cauchy_kernel([1.2, 0.0, 0.0], T, 16)


def test_probe_decay_improves_with_radius(pair):
    b = spectral_radius_bound(pair)
    rates = [resolvent_probe([r * b, 0, 0], pair, J=10).rate for r in (1.5, 2.0, 4.0)]
    assert rates[0] > rates[1] > rates[2]
    rep = resolvent_probe([4 * b, 0, 0], pair, J=5)
    rows = list(rep.rows())
    assert len(rows) == 6 and rows[0][0] == pytest.approx(4 * b)
    assert rep.verdict == "converging"


def test_zero_tuple_probe_converges():
    Z = [np.zeros((2, 2))] * 2
    rep = resolvent_probe([0.3, 0.0, 0.0], Z, J=4)
    assert rep.verdict == "converging"
    assert all(t == 0.0 for t in rep.term_norms[1:])


def test_taylor_basis_values(pair, rng):
    assert np.allclose(calculus_taylor(HyperPolynomial.constant(2), pair).matrix, np.eye(3))
    assert np.allclose(calculus_taylor(HyperPolynomial.regular_variable(2, 1), pair).matrix, pair[0])
    f = HyperPolynomial.basis((2, 1))
    assert np.allclose(calculus_taylor(f, pair).matrix, symmetric_product([pair[0], pair[0], pair[1]]))


def test_taylor_clifford_coefficients(pair):
    c = Multivector.blade(2, (1, 2), 2.0)
    res = calculus_taylor(HyperPolynomial.basis((1, 0), c), pair)
    assert not res.is_matrix
    with pytest.raises(ValueError):
        res.matrix
    assert np.allclose(res.value[0b11], 2.0 * pair[0])


def test_integral_matches_taylor(pair, rng):
    f = HyperPolynomial.random(2, 3, rng)
    a = calculus_taylor(f, pair)
    b = calculus_integral(f, pair)
    assert relative_difference(b.value, a.value, 3) < 1e-10
    assert b.diagnostics["radius"] == pytest.approx(2 * spectral_radius_bound(pair))
    # kernel terms beyond the degree of f integrate to zero
    c = calculus_integral(f, pair, OperatorKernelConfig(truncation=5))
    assert relative_difference(c.value, a.value, 3) < 1e-10


def test_integral_triple(rng):
    T = OperatorTuple([hermitian(rng, 2) for _ in range(3)])
    f = HyperPolynomial.random(3, 2, rng)
    res = calculus_integral(f, T, OperatorKernelConfig(quad_order=16))
    assert relative_difference(res.value, calculus_taylor(f, T).value, 2) < 1e-10


def test_integral_preconditions(pair, rng):
    f = HyperPolynomial.random(2, 2, rng)
    with pytest.raises(SpectralBoundError, match="radius below spectral bound"):
        calculus_integral(f, pair, OperatorKernelConfig(radius=0.5 * spectral_radius_bound(pair)))
    with pytest.raises(ValueError):
        calculus_integral(f, pair, OperatorKernelConfig(truncation=1))


def test_vanishing(pair, rng):
    f = HyperPolynomial.random(2, 3, rng)
    b = spectral_radius_bound(pair)
    assert vanishing_check(f, pair, 1.5 * b, 3 * b) < 1e-9
    with pytest.raises(SpectralBoundError):
        vanishing_check(f, pair, 0.5 * b, 3 * b)


def test_commuting_oracle(rng):
    C = random_commuting_tuple(3, 4, rng)
    f = HyperPolynomial.random(3, 3, rng)
    a = calculus_taylor(f, C)
    b = commuting_oracle(f, C)
    assert relative_difference(b.value, a.value, 4) < 1e-10


def test_commuting_oracle_pads_extra_dimensions(rng):
    C = random_commuting_tuple(2, 3, rng)
    f = HyperPolynomial.random(3, 2, rng)
    assert relative_difference(commuting_oracle(f, C).value, calculus_taylor(f, C).value, 3) < 1e-10


def test_commuting_oracle_refuses(pair, rng):
    with pytest.raises(ValueError):
        commuting_oracle(HyperPolynomial.random(2, 1, rng), pair)


def test_taylor_series_tail_bound(pair):
    # coefficients 1/alpha! give an entire series; the tail bound shrinks with degree
    from math import factorial

    coeff = lambda a: Multivector.scalar(2, 1.0 / (factorial(a[0]) * factorial(a[1])))
    low = calculus_taylor_series(coeff, pair, 2, 4)
    high = calculus_taylor_series(coeff, pair, 2, 12)
    assert high.diagnostics["tail_bound"] < low.diagnostics["tail_bound"]
    # the low tail covers exactly the degrees 5..12 that separate the two sums
    assert np.linalg.norm(low.matrix - high.matrix, 2) <= low.diagnostics["tail_bound"]


def test_no_warning_inside_convergence_region(pair, rng):
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        calculus_integral(HyperPolynomial.random(2, 3, rng), pair)


def test_result_serializes(pair):
    d = calculus_taylor(HyperPolynomial.constant(2), pair).to_dict()
    assert d["schema"].endswith("calculus-result/1")
    assert "matrix" in d
