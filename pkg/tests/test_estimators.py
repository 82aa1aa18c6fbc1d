import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from riesz_clifford.estimators import HyperholomorphicCalculus, WeylQuantizer
from riesz_clifford.polyspace import HyperPolynomial
from riesz_clifford.quant import jordan_product
from riesz_clifford.validation import HermiticityError

from conftest import hermitian


def test_params_and_clone():
    est = HyperholomorphicCalculus(route="integral", quad_order=24)
    params = est.get_params()
    assert params["route"] == "integral" and params["quad_order"] == 24
    other = clone(est).set_params(route="taylor")
    assert other.route == "taylor" and est.route == "integral"


def test_not_fitted():
    with pytest.raises(NotFittedError):
        HyperholomorphicCalculus().transform([HyperPolynomial.constant(2)])
    with pytest.raises(NotFittedError):
        WeylQuantizer().transform(["x1"])


def test_calculus_routes_agree(rng):
    T = [hermitian(rng), hermitian(rng)]
    fs = [HyperPolynomial.random(2, 2, rng) for _ in range(3)]
    a = HyperholomorphicCalculus().fit(T).transform(fs)
    est = HyperholomorphicCalculus(route="integral").fit(T)
    b = est.transform(fs)
    assert a.shape == (3, 4, 3, 3)
    assert np.allclose(a, b, atol=1e-10)
    assert est.spectral_bound_ > 0 and est.n_operators_ == 2 and est.dim_ == 3
    assert est.score(fs) > -1e-10


def test_calculus_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        HyperholomorphicCalculus(route="contour").fit([hermitian(rng)])
    with pytest.raises(HermiticityError):
        HyperholomorphicCalculus().fit([rng.standard_normal((3, 3))])


def test_quantizer(rng):
    A, B = hermitian(rng), hermitian(rng)
    out = WeylQuantizer().fit([A, B]).transform(["x1 x2", "x1^2"])
    assert out.shape == (2, 3, 3)
    assert np.allclose(out[0], jordan_product(A, B))
    assert np.allclose(out[1], A @ A)
