from fractions import Fraction

import numpy as np
import pytest

from riesz_clifford.clifford import Multivector
from riesz_clifford.polynomial import MVPolynomial, dirac_apply


def test_variable_and_derivative():
    x1 = MVPolynomial.variable(2, 1)
    p = x1 * x1 * MVPolynomial.variable(2, 0)
    assert p.degree() == 3
    assert p.derivative(1) == 2 * x1 * MVPolynomial.variable(2, 0)
    assert p.derivative(2).is_zero()


def test_dirac_of_cauchy_riemann_pair_vanishes():
    # x0 e1 - x1 is annihilated by e0 d0 + e1 d1
    e1 = Multivector.blade(1, (1,))
    p = MVPolynomial.variable(1, 0).right_mul(e1) - MVPolynomial.variable(1, 1)
    assert dirac_apply(p).is_zero()
    assert not dirac_apply(MVPolynomial.variable(1, 1)).is_zero()


def test_dense_evaluation_matches_exact(rng):
    e12 = Multivector.blade(2, (1, 2), 1.5)
    x0, x1, x2 = (MVPolynomial.variable(2, j) for j in range(3))
    p = (x0 * x1 * x1).left_mul(e12) + x2 - MVPolynomial.constant(Multivector.scalar(2, 3.0))
    pts = rng.standard_normal((7, 3))
    dense = p.evaluate_dense(pts)
    for i, pt in enumerate(pts):
        assert np.allclose(dense[i], p(pt).to_dense())


def test_exact_evaluation_is_rational():
    x1 = MVPolynomial.variable(2, 1)
    val = (x1 * x1 / Fraction(3)).evaluate_exact([0, Fraction(1, 2), 0])
    assert val[0] == Fraction(1, 12)


def test_coefficient_vector_orders_keys():
    p = MVPolynomial.monomial(2, (1, 0, 0), 2.0) + MVPolynomial.monomial(2, (0, 1, 0), 5.0)
    keys = sorted(p.terms)
    assert list(p.coefficient_vector(keys)) == [5.0, 2.0]
    with pytest.raises((ValueError, TypeError)):
        MVPolynomial.monomial(2, (1, 0), 1.0)
