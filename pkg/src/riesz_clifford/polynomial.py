"""Polynomials in ``x0, ..., xn`` with Clifford-valued coefficients.

Terms are keyed by ``(exponents, blade)`` so that coefficients stay in the
base ring (int, Fraction or float) and exact arithmetic is possible.  The
polynomial ``sum c * x^k e_B`` is always read with the blade on the right of
the real coefficient; since real scalars are central the order is immaterial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from .clifford import Multivector, blade_mul, CliffordDimensionError

Key = tuple[tuple[int, ...], int]


class MVPolynomial:
    """Polynomial in ``n + 1`` real variables with coefficients in Cl(0, n)."""

    def __init__(self, n: int, terms: Mapping[Key, object] | None = None):
        self.n = n
        clean = {}
        for (exps, bits), c in (terms or {}).items():
            if len(exps) != n + 1:
                raise CliffordDimensionError(f"exponent tuple {exps} needs {n + 1} entries")
            if c != 0:
                clean[(tuple(exps), bits)] = c
        self.terms = clean

    @classmethod
    def variable(cls, n: int, j: int) -> "MVPolynomial":
        exps = [0] * (n + 1)
        exps[j] = 1
        return cls(n, {(tuple(exps), 0): 1})

    @classmethod
    def constant(cls, mv: Multivector) -> "MVPolynomial":
        zero = (0,) * (mv.n + 1)
        return cls(mv.n, {(zero, b): c for b, c in mv.terms.items()})

    @classmethod
    def monomial(cls, n: int, exps, coeff=1, bits: int = 0) -> "MVPolynomial":
        return cls(n, {(tuple(exps), bits): coeff})

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "MVPolynomial") -> "MVPolynomial":
        if other.n != self.n:
            raise CliffordDimensionError("dimension mismatch")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return MVPolynomial(self.n, terms)

    def __neg__(self) -> "MVPolynomial":
        return MVPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MVPolynomial") -> "MVPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MVPolynomial):
            return MVPolynomial(self.n, {k: c * other for k, c in self.terms.items()})
        if other.n != self.n:
            raise CliffordDimensionError("dimension mismatch")
        n = self.n
        terms: dict[Key, object] = {}
        for (ea, ba), ca in self.terms.items():
            for (eb, bb), cb in other.terms.items():
                s, bits = blade_mul(ba, bb, n)
                key = (tuple(x + y for x, y in zip(ea, eb)), bits)
                terms[key] = terms.get(key, 0) + s * ca * cb
        return MVPolynomial(n, terms)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return MVPolynomial(self.n, {k: c / other for k, c in self.terms.items()})

    def left_mul(self, mv: Multivector) -> "MVPolynomial":
        """``mv * self`` for a constant multivector ``mv``."""
        return MVPolynomial.constant(mv) * self

    def right_mul(self, mv: Multivector) -> "MVPolynomial":
        return self * MVPolynomial.constant(mv)

    def derivative(self, j: int) -> "MVPolynomial":
        """Exact partial derivative in ``x_j`` (``0 <= j <= n``)."""
        terms: dict[Key, object] = {}
        for (exps, bits), c in self.terms.items():
            p = exps[j]
            if p:
                e = list(exps)
                e[j] -= 1
                key = (tuple(e), bits)
                terms[key] = terms.get(key, 0) + p * c
        return MVPolynomial(self.n, terms)

    def dirac(self) -> "MVPolynomial":
        """Left Dirac derivative ``sum_{j=0}^n e_j d/dx_j``."""
        return dirac_apply(self)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, MVPolynomial):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"MVPolynomial(n={self.n}, terms={len(self.terms)})"

    @cached_property
    def _compiled(self):
        monos = sorted({e for e, _ in self.terms})
        index = {e: i for i, e in enumerate(monos)}
        exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.n + 1)
        C = np.zeros((len(monos), 1 << self.n))
        for (e, bits), c in self.terms.items():
            C[index[e], bits] += float(c)
        return exps, C

    def evaluate_dense(self, points) -> np.ndarray:
        """Evaluate at an array of points ``(N, n+1)``; returns ``(N, 2**n)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        exps, C = self._compiled
        if exps.shape[0] == 0:
            return np.zeros((pts.shape[0], 1 << self.n))
        top = int(exps.max(initial=0))
        # powers[j][:, p] = x_j ** p
        powers = [np.cumprod(np.hstack([np.ones((pts.shape[0], 1)), np.repeat(pts[:, j:j + 1], top, axis=1)]), axis=1)
                  for j in range(self.n + 1)]
        monos = powers[0][:, exps[:, 0]]
        for j in range(1, self.n + 1):
            monos = monos * powers[j][:, exps[:, j]]
        return monos @ C

    def __call__(self, point) -> Multivector:
        return Multivector.from_dense(self.evaluate_dense([point])[0], self.n)

    def evaluate_exact(self, point) -> Multivector:
        """Evaluate with the coefficient ring's own arithmetic (e.g. Fractions)."""
        out: dict[int, object] = {}
        for (exps, bits), c in self.terms.items():
            v = c
            for x, p in zip(point, exps):
                if p:
                    v = v * x**p
            out[bits] = out.get(bits, 0) + v
        return Multivector(self.n, out)

    def coefficient_vector(self, keys: list[Key]) -> np.ndarray:
        return np.array([float(self.terms.get(k, 0)) for k in keys])


def dirac_apply(p: MVPolynomial) -> MVPolynomial:
    """``D p = sum_{j=0}^n e_j dp/dx_j``, computed term by term.

    ``p`` is hyperholomorphic exactly when the result is the zero polynomial.
    """
    n = p.n
    out = MVPolynomial(n)
    for j in range(n + 1):
        dp = p.derivative(j)
        if dp.is_zero():
            continue
        ej = Multivector.scalar(n) if j == 0 else Multivector.blade(n, [j])
        out = out + dp.left_mul(ej)
    return out


def exact(value):
    """Coerce ints to Fractions so that division stays exact."""
    return Fraction(value) if isinstance(value, int) else value
