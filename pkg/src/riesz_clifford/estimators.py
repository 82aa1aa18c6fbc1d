"""Estimator-style wrappers around the calculus and quantization routines.

``fit`` validates and stores an operator tuple; ``transform`` maps a list of
polynomials to their operator values.  Hyperparameters live in ``__init__``
so ``get_params``/``set_params``/``clone`` behave as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .calculus import (
    OperatorKernelConfig,
    calculus_integral,
    calculus_taylor,
    relative_difference,
    spectral_radius_bound,
)
from .polyspace import HyperPolynomial, OperatorTuple
from .quant import ClassicalPolynomial, parse_polynomial, quantize
from .validation import HERMITIAN_RTOL


def _fit_tuple(est, T):
    est.operators_ = T if isinstance(T, OperatorTuple) else OperatorTuple(T, rtol=est.hermitian_rtol)
    est.n_operators_ = est.operators_.m
    est.dim_ = est.operators_.d
    est.spectral_bound_ = spectral_radius_bound(est.operators_)
    return est


class HyperholomorphicCalculus(TransformerMixin, BaseEstimator):
    """Evaluate ``f(T)`` for hyperholomorphic polynomials ``f``.

    Parameters
    ----------
    route : {"taylor", "integral"}
        Construction used by :meth:`transform`.
    radius : float, optional
        Integration radius; defaults to ``radius_factor`` times the bound.
    quad_order : int
    truncation : int, optional
    radius_factor : float
    hermitian_rtol : float
    """

    def __init__(self, route="taylor", radius=None, quad_order=32, truncation=None,
                 radius_factor=2.0, hermitian_rtol=HERMITIAN_RTOL):
        self.route = route
        self.radius = radius
        self.quad_order = quad_order
        self.truncation = truncation
        self.radius_factor = radius_factor
        self.hermitian_rtol = hermitian_rtol

    def fit(self, T, y=None):
        if self.route not in ("taylor", "integral"):
            raise ValueError(f"route must be 'taylor' or 'integral', got {self.route!r}")
        _fit_tuple(self, T)
        self.config_ = OperatorKernelConfig(
            truncation=self.truncation, radius=self.radius,
            quad_order=self.quad_order, radius_factor=self.radius_factor,
        )
        return self

    def evaluate(self, f: HyperPolynomial):
        """Full :class:`CalculusResult` for one polynomial."""
        check_is_fitted(self, "operators_")
        if self.route == "taylor":
            return calculus_taylor(f, self.operators_)
        return calculus_integral(f, self.operators_, self.config_)

    def transform(self, X):
        """Dense values, shape ``(len(X), 2**n, d, d)`` with the blade axis second."""
        check_is_fitted(self, "operators_")
        if isinstance(X, HyperPolynomial):
            X = [X]
        out = [self.evaluate(f) for f in X]
        return np.stack([r.dense() for r in out])

    def score(self, X, y=None):
        """Negative worst relative disagreement between the two routes."""
        check_is_fitted(self, "operators_")
        if isinstance(X, HyperPolynomial):
            X = [X]
        worst = 0.0
        for f in X:
            a = calculus_taylor(f, self.operators_).value
            b = calculus_integral(f, self.operators_, self.config_).value
            worst = max(worst, relative_difference(a, b, self.dim_))
        return -worst


class WeylQuantizer(TransformerMixin, BaseEstimator):
    """Symmetric quantization of classical polynomials on a fitted tuple."""

    def __init__(self, hermitian_rtol=HERMITIAN_RTOL):
        self.hermitian_rtol = hermitian_rtol

    def fit(self, T, y=None):
        return _fit_tuple(self, T)

    def transform(self, X):
        """Polynomials (objects or text) to an array of shape ``(len(X), d, d)``."""
        check_is_fitted(self, "operators_")
        if isinstance(X, (str, ClassicalPolynomial)):
            X = [X]
        polys = [parse_polynomial(p, m=self.n_operators_) if isinstance(p, str) else p for p in X]
        return np.stack([quantize(p, self.operators_) for p in polys])
