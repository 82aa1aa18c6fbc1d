"""Cauchy kernel, the outer basis ``W_alpha`` and quadrature on spheres.

The kernel in R^{n+1} is ``E(x) = conj(x) / (omega_n |x|^{n+1})`` where
``omega_n`` is the area of the unit sphere S^n.  The functions

    W_alpha(y) = (1 / alpha!) d^alpha E(y)        (derivatives in y_1..y_n)

pair with ``V_alpha`` so that ``E(y - x) = sum_alpha V_alpha(x) W_alpha(y)``
for ``|x| < |y|`` and ``int W_beta dsigma V_alpha = delta_{alpha beta}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from .clifford import Multivector, conjugate, dense_mul
from .polynomial import MVPolynomial
from .polyspace import multi_indices_upto, v_poly_point, v_polynomial
from .validation import check_multi_index, check_point, check_positive


class SingularityError(ValueError):
    """Raised when a kernel is evaluated at its pole."""


def unit_sphere_area(n: int) -> float:
    """Area of the unit sphere S^n in R^{n+1}."""
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def sphere_area(n: int, r: float) -> float:
    return unit_sphere_area(n) * r**n


# -- exact rational multivector functions ------------------------------------

def _norm_squared_poly(n: int) -> MVPolynomial:
    terms = {}
    for j in range(n + 1):
        e = [0] * (n + 1)
        e[j] = 2
        terms[(tuple(e), 0)] = 1
    return MVPolynomial(n, terms)


@dataclass(frozen=True, eq=False)
class RationalMV:
    """``scale * numerator(x) / |x|**denom_power``.

    ``numerator`` keeps exact (integer or rational) coefficients so that
    derivatives and the Dirac operator can be checked symbolically.
    """

    numerator: MVPolynomial
    denom_power: int
    scale: float = 1.0

    @property
    def n(self) -> int:
        return self.numerator.n

    def derivative(self, j: int) -> "RationalMV":
        # d/dx_j (P |x|^-s) = (dP/dx_j |x|^2 - s x_j P) |x|^-(s+2)
        n = self.n
        s = self.denom_power
        num = self.numerator.derivative(j) * _norm_squared_poly(n) - (
            MVPolynomial.variable(n, j) * self.numerator
        ) * s
        return RationalMV(num, s + 2, self.scale)

    def dirac(self) -> "RationalMV":
        """Left Dirac operator applied symbolically."""
        n = self.n
        out = MVPolynomial(n)
        for j in range(n + 1):
            ej = Multivector.scalar(n) if j == 0 else Multivector.blade(n, [j])
            out = out + self.derivative(j).numerator.left_mul(ej)
        return RationalMV(out, self.denom_power + 2, self.scale)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def evaluate_dense(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        if np.any(r == 0):
            raise SingularityError("rational kernel evaluated at the origin")
        return self.numerator.evaluate_dense(pts) * (self.scale / r**self.denom_power)[:, None]

    def __call__(self, x) -> Multivector:
        x = check_point(x, self.n)
        return Multivector.from_dense(self.evaluate_dense(x[None, :])[0], self.n)


@lru_cache(maxsize=None)
def cauchy_rational(n: int) -> RationalMV:
    """The Cauchy kernel as a :class:`RationalMV` with numerator ``conj(x)``."""
    terms = {}
    for j in range(n + 1):
        e = [0] * (n + 1)
        e[j] = 1
        terms[(tuple(e), 0 if j == 0 else 1 << (j - 1))] = 1 if j == 0 else -1
    return RationalMV(MVPolynomial(n, terms), n + 1, 1.0 / unit_sphere_area(n))


@lru_cache(maxsize=None)
def _kernel_derivative(alpha: tuple[int, ...]) -> RationalMV:
    n = len(alpha)
    if not any(alpha):
        return cauchy_rational(n)
    j = max(i for i, a in enumerate(alpha) if a)
    prev = list(alpha)
    prev[j] -= 1
    return _kernel_derivative(tuple(prev)).derivative(j + 1)


@lru_cache(maxsize=None)
def w_rational(alpha: tuple[int, ...]) -> RationalMV:
    """``W_alpha`` in rational form (integer numerator, scale includes 1/alpha!)."""
    alpha = check_multi_index(alpha)
    d = _kernel_derivative(alpha)
    fact = math.prod(math.factorial(a) for a in alpha)
    return RationalMV(d.numerator, d.denom_power, d.scale / fact)


def cauchy_kernel(x) -> Multivector:
    """``E(x) = conj(x) / (omega_n |x|^{n+1})`` at a nonzero point of R^{n+1}."""
    x = check_point(x)
    n = x.size - 1
    r = float(np.linalg.norm(x))
    if r == 0:
        raise SingularityError("Cauchy kernel is singular at the origin")
    return conjugate(Multivector.vector(x)) * (1.0 / (unit_sphere_area(n) * r ** (n + 1)))


def cauchy_kernel_dense(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[1] - 1
    r = np.linalg.norm(pts, axis=1)
    if np.any(r == 0):
        raise SingularityError("Cauchy kernel is singular at the origin")
    out = np.zeros((pts.shape[0], 1 << n))
    out[:, 0] = pts[:, 0]
    for j in range(1, n + 1):
        out[:, 1 << (j - 1)] = -pts[:, j]
    return out / (unit_sphere_area(n) * r ** (n + 1))[:, None]


def w_poly(alpha, x) -> Multivector:
    """``W_alpha(x)``; ``W_0`` is the Cauchy kernel."""
    x = check_point(x)
    alpha = check_multi_index(alpha, x.size - 1)
    if not np.any(x):
        raise SingularityError("W_alpha is singular at the origin")
    return w_rational(alpha)(x)


def w_dense(alpha, points) -> np.ndarray:
    return w_rational(tuple(alpha)).evaluate_dense(points)


# -- quadrature -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes, positive weights and outward unit normals on the sphere S^n(0, r)."""

    n: int
    r: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray

    def __len__(self) -> int:
        return self.weights.size

    def dsigma_dense(self) -> np.ndarray:
        """Oriented surface element ``nu(y) * w`` per node as dense multivectors."""
        out = np.zeros((len(self), 1 << self.n))
        out[:, 0] = self.normals[:, 0]
        for j in range(1, self.n + 1):
            out[:, 1 << (j - 1)] = self.normals[:, j]
        return out * self.weights[:, None]

    def dsigma(self, i: int) -> Multivector:
        return Multivector.vector(self.normals[i]) * float(self.weights[i])

    def to_dict(self) -> dict:
        return {
            "schema": "riesz-clifford/quadrature/1",
            "n": self.n,
            "r": self.r,
            "order": self.order,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
            "normals": self.normals.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "QuadratureRule":
        return cls(
            n=int(data["n"]),
            r=float(data["r"]),
            order=int(data["order"]),
            nodes=np.asarray(data["nodes"], dtype=float),
            weights=np.asarray(data["weights"], dtype=float),
            normals=np.asarray(data["normals"], dtype=float),
        )


@lru_cache(maxsize=32)
def sphere_rule(n: int, r: float, order: int) -> QuadratureRule:
    """Product rule on S^n(0, r) for n in {1, 2, 3}.

    Polar angles use Gauss rules in their cosines (Gauss-Legendre, and
    Gauss-Chebyshev of the second kind for the ``sin^2`` weight on S^3);
    the azimuth uses the trapezoid rule with ``2 * order`` points.
    """
    r = check_positive(r, "radius")
    if n not in (1, 2, 3):
        raise ValueError(f"sphere quadrature supports n in {{1, 2, 3}}, got {n}")
    if order < 2:
        raise ValueError("quadrature order must be at least 2")
    M = 2 * order
    phi = 2.0 * np.pi * np.arange(M) / M
    wphi = np.full(M, 2.0 * np.pi / M)
    if n == 1:
        unit = np.stack([np.cos(phi), np.sin(phi)], axis=1)
        w = wphi
    elif n == 2:
        t, wt = np.polynomial.legendre.leggauss(order)
        T, P = np.meshgrid(t, phi, indexing="ij")
        s = np.sqrt(1.0 - T**2)
        unit = np.stack([T, s * np.cos(P), s * np.sin(P)], axis=-1).reshape(-1, 3)
        w = np.outer(wt, wphi).ravel()
    else:
        u, wu = special.roots_chebyu(order)
        t, wt = np.polynomial.legendre.leggauss(order)
        U, T, P = np.meshgrid(u, t, phi, indexing="ij")
        su = np.sqrt(1.0 - U**2)
        st = np.sqrt(1.0 - T**2)
        unit = np.stack([U, su * T, su * st * np.cos(P), su * st * np.sin(P)], axis=-1).reshape(-1, 4)
        w = (wu[:, None, None] * wt[None, :, None] * wphi[None, None, :]).ravel()
    nodes = r * unit
    weights = w * r**n
    for arr in (nodes, weights, unit):
        arr.setflags(write=False)
    return QuadratureRule(n=n, r=r, order=order, nodes=nodes, weights=weights, normals=unit)


@lru_cache(maxsize=128)
def _w_unit_sphere(alpha: tuple[int, ...], order: int) -> np.ndarray:
    vals = w_dense(alpha, sphere_rule(len(alpha), 1.0, order).nodes)
    vals.setflags(write=False)
    return vals


def w_on_rule(alpha, rule: QuadratureRule) -> np.ndarray:
    """``W_alpha`` at the nodes of ``rule``, shape ``(N, 2**n)``.

    Uses the homogeneity ``W_alpha(r u) = r^{-n-|alpha|} W_alpha(u)`` so the
    unit-sphere values are computed once per rule order.
    """
    alpha = check_multi_index(alpha, rule.n)
    return _w_unit_sphere(alpha, rule.order) * rule.r ** (-rule.n - sum(alpha))


def integrate_boundary(
    rule: QuadratureRule, integrand: Callable[[np.ndarray, Multivector], Multivector]
) -> Multivector:
    """Sum ``integrand(y, dsigma_y)`` over the nodes in their stored order.

    The integrand receives the node and the oriented surface element
    ``nu(y) * w`` and is responsible for the left/right placement of its
    factors around it.
    """
    total = Multivector(rule.n)
    for i in range(len(rule)):
        total = total + integrand(rule.nodes[i], rule.dsigma(i))
    return total


def cauchy_integral_dense(rule: QuadratureRule, x, f_values: np.ndarray) -> np.ndarray:
    """``sum_y E(y - x) dsigma_y f(y)`` for dense values ``f(y)`` at the nodes."""
    x = check_point(x, rule.n)
    E = cauchy_kernel_dense(rule.nodes - x[None, :])
    return dense_mul(dense_mul(E, rule.dsigma_dense(), rule.n), f_values, rule.n).sum(axis=0)


def boundary_pairing(beta, alpha, rule: QuadratureRule) -> Multivector:
    """``int_{S^n(0,r)} W_beta(y) dsigma_y V_alpha(y)`` by quadrature."""
    Wb = w_dense(beta, rule.nodes)
    Va = v_polynomial(tuple(alpha)).evaluate_dense(rule.nodes)
    vals = dense_mul(dense_mul(Wb, rule.dsigma_dense(), rule.n), Va, rule.n)
    return Multivector.from_dense(vals.sum(axis=0), rule.n)


def biorthogonality_residual(n: int, max_degree: int, order: int, r: float = 1.0) -> float:
    """``max |int W_beta dsigma V_alpha - delta_{alpha beta}|`` over all pairs."""
    rule = sphere_rule(n, r, order)
    alphas = multi_indices_upto(n, max_degree)
    ds = rule.dsigma_dense()
    W = {a: dense_mul(w_dense(a, rule.nodes), ds, n) for a in alphas}
    V = {a: v_polynomial(a).evaluate_dense(rule.nodes) for a in alphas}
    worst = 0.0
    for beta in alphas:
        for alpha in alphas:
            val = dense_mul(W[beta], V[alpha], n).sum(axis=0)
            if alpha == beta:
                val[0] -= 1.0
            worst = max(worst, float(np.max(np.abs(val))))
    return worst


# -- kernel expansion ---------------------------------------------------------

def kernel_decomposition_residuals(x, y, J: int) -> np.ndarray:
    """Residuals ``|E(y - x) - sum_{|alpha| <= j} V_alpha(x) W_alpha(y)|`` for j = 0..J.

    The norm is the coefficient-wise sup norm.
    """
    x = check_point(x)
    y = check_point(y, x.size - 1)
    if not np.linalg.norm(x) < np.linalg.norm(y):
        raise ValueError("kernel expansion requires |x| < |y|")
    n = x.size - 1
    target = cauchy_kernel(y - x)
    partial = Multivector(n)
    out = []
    for j in range(J + 1):
        for alpha in multi_indices_upto(n, j)[len(multi_indices_upto(n, j - 1)) if j else 0:]:
            partial = partial + v_poly_point(alpha, x) * w_poly(alpha, y)
        out.append((target - partial).norm_inf())
    return np.array(out)


def kernel_decomposition_check(x, y, J: int) -> float:
    return float(kernel_decomposition_residuals(x, y, J)[-1])
