import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riesz_clifford.clifford import Multivector
from riesz_clifford.polyspace import (
    HyperPolynomial,
    OperatorTuple,
    ck_polynomial,
    dirac_apply,
    multi_indices,
    multi_indices_upto,
    regular_variable,
    symmetric_power,
    symmetric_product,
    v_poly_ck,
    v_poly_operators,
    v_poly_point,
    v_polynomial,
)
from riesz_clifford.validation import HermiticityError
from riesz_clifford.verify import basis_dimension

from conftest import hermitian


def test_multi_indices_order_and_count():
    assert multi_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]
    for n in (1, 2, 3):
        for k in range(6):
            assert len(multi_indices(n, k)) == math.comb(k + n - 1, n - 1)
    assert len(multi_indices_upto(2, 5)) == 21
    assert len(multi_indices_upto(3, 5)) == 56


def test_regular_variable_values():
    z = regular_variable(2, [2.0, 3.0, 5.0])
    assert z == Multivector(2, {0b10: 2.0, 0: -5.0})


# hand expansions of the symmetrized products of z_j = e_j x0 - x_j
@pytest.mark.parametrize(
    "alpha, expected",
    [
        ((1, 0), {0: -3.0, 0b01: 2.0}),
        ((2, 0), {0: 5.0, 0b01: -12.0}),
        ((1, 1), {0: 15.0, 0b01: -10.0, 0b10: -6.0}),
        ((0, 0), {0: 1.0}),
    ],
)
def test_v_alpha_hand_values(alpha, expected):
    x = [2.0, 3.0, 5.0]
    assert v_poly_point(alpha, x).allclose(Multivector(2, expected))
    assert v_poly_ck(alpha, x).allclose(Multivector(2, expected))


@pytest.mark.parametrize("n", [2, 3])
def test_v_alpha_hyperholomorphic_exact(n):
    for alpha in multi_indices_upto(n, 4):
        p = v_polynomial(alpha)
        assert all(isinstance(c, Fraction) for c in p.terms.values())
        assert dirac_apply(p).is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_two_definitions_agree_exactly(n):
    for alpha in multi_indices_upto(n, 4):
        assert v_polynomial(alpha) == ck_polynomial(alpha)


def test_restriction_to_hyperplane_is_monomial(rng):
    # V_alpha(0, x1..xn) = (-1)^|alpha| x^alpha
    for alpha in multi_indices_upto(3, 3):
        pt = np.concatenate([[0.0], rng.standard_normal(3)])
        val = v_poly_point(alpha, pt)
        mono = (-1) ** sum(alpha) * np.prod(pt[1:] ** np.array(alpha))
        assert val.allclose(Multivector.scalar(3, mono), atol=1e-12)


def test_basis_dimension():
    for n in (1, 2, 3):
        for k in range(5):
            rank, dim = basis_dimension(n, k)
            assert rank == dim


def test_symmetric_product_small_cases(rng):
    A, B, C = (hermitian(rng) for _ in range(3))
    assert np.allclose(symmetric_product([A, B]), (A @ B + B @ A) / 2)
    six = (A @ B @ C + A @ C @ B + B @ A @ C + B @ C @ A + C @ A @ B + C @ B @ A) / 6
    assert np.allclose(symmetric_product([A, B, C]), six)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31))
def test_symmetric_product_matches_naive(k, seed):
    g = np.random.default_rng(seed)
    mats = [hermitian(g) for _ in range(k)]
    fast = symmetric_product(mats)
    assert np.allclose(fast, symmetric_product(mats, method="naive"), atol=1e-12)
    perm = g.permutation(k)
    assert np.allclose(fast, symmetric_product([mats[i] for i in perm]), atol=1e-12)
    assert np.allclose(fast, fast.conj().T, atol=1e-12)


def test_symmetric_power_exact_fractions():
    a = [Fraction(2), Fraction(3)]
    assert symmetric_power(a, (2, 1), lambda x, y: x * y, Fraction(1), exact=True) == 12


def test_v_poly_operators_commuting_collapses(rng):
    T = [np.diag([1.0, 2.0, -1.0]), np.diag([0.5, -3.0, 2.0])]
    assert np.allclose(v_poly_operators((2, 1), T), T[0] @ T[0] @ T[1])
    # padding indices act as identity factors
    assert np.allclose(v_poly_operators((1, 0, 0), T, n=3), T[0])


def test_operator_tuple_validation(rng):
    A = rng.standard_normal((3, 3))
    with pytest.raises(HermiticityError) as info:
        OperatorTuple([hermitian(rng), A])
    assert info.value.violations[0][0] == 1
    with pytest.raises(ValueError):
        OperatorTuple([np.eye(2), np.eye(3)])
    T = OperatorTuple([np.eye(2), np.diag([1.0, -1.0])])
    assert T.is_commuting()
    with pytest.raises(ValueError):
        T.mats[0][0, 0] = 5.0


def test_hyperpolynomial_evaluation_linear(rng):
    f = HyperPolynomial.random(2, 3, rng)
    g = HyperPolynomial.random(2, 2, rng)
    x = rng.standard_normal(3)
    assert (f + g)(x).allclose(f(x) + g(x), atol=1e-10)
    assert (f * 2.0)(x).allclose(f(x) * 2.0, atol=1e-10)
    assert dirac_apply(f.polynomial).is_zero() or max(
        abs(float(c)) for c in dirac_apply(f.polynomial).terms.values()) < 1e-12
