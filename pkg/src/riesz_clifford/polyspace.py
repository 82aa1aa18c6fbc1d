"""Multi-indices, symmetric products and the hyperholomorphic basis ``V_alpha``.

``V_alpha`` is the symmetric product of the regular variables
``xr_j = e_j x0 - e0 x_j`` taken with multiplicities ``alpha``.  Substituting
operators ``T_j`` for ``xr_j`` gives ``V_alpha(T)``, a plain matrix.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .clifford import Multivector, mv_mul, CliffordDimensionError
from .polynomial import MVPolynomial, dirac_apply
from .validation import check_matrices, check_multi_index, check_point, HERMITIAN_RTOL

__all__ = [
    "HyperPolynomial",
    "OperatorTuple",
    "ck_polynomial",
    "dirac_apply",
    "multi_indices",
    "multi_indices_upto",
    "regular_variable",
    "symmetric_power",
    "symmetric_product",
    "v_poly_ck",
    "v_poly_operators",
    "v_poly_point",
    "v_polynomial",
]


def multi_indices(n: int, degree: int) -> list[tuple[int, ...]]:
    """All ``alpha`` in N^n with ``|alpha| = degree``, in lexicographic order."""
    if n < 1 or degree < 0:
        raise ValueError("need n >= 1 and degree >= 0")
    if n == 1:
        return [(degree,)]
    out = []
    for first in range(degree + 1):
        for rest in multi_indices(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def multi_indices_upto(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """Multi-indices of degree ``0..max_degree``, grouped by degree."""
    return [a for k in range(max_degree + 1) for a in multi_indices(n, k)]


# -- symmetric products ---------------------------------------------------

def _check_factor_list(factors) -> list[np.ndarray]:
    if len(factors) == 0:
        raise ValueError("symmetric product of an empty list")
    mats = [np.asarray(a) for a in factors]
    shape = mats[0].shape
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError("factors must be square matrices")
    for a in mats:
        if a.shape != shape:
            raise ValueError(f"factor shape {a.shape} does not match {shape}")
    return mats


def _naive_symmetric_product(mats: list[np.ndarray]) -> np.ndarray:
    k = len(mats)
    total = np.zeros_like(mats[0], dtype=np.result_type(*mats, float))
    for perm in itertools.permutations(range(k)):
        prod = mats[perm[0]]
        for j in perm[1:]:
            prod = prod @ mats[j]
        total = total + prod
    return total / math.factorial(k)


def symmetric_product(factors: Sequence[np.ndarray], method: str = "subset") -> np.ndarray:
    """Average of the ordered products over all permutations of ``factors``.

    The default evaluates ``S(A) = (1/|A|) sum_{j in A} S(A - j) a_j`` over
    the ``2**k`` subsets; ``method="naive"`` sums the ``k!`` orderings and is
    kept as a reference for tests.
    """
    mats = _check_factor_list(factors)
    if method == "naive":
        return _naive_symmetric_product(mats)
    if method != "subset":
        raise ValueError(f"unknown method {method!r}")
    k = len(mats)
    dtype = np.result_type(*mats, float)
    S: list[np.ndarray | None] = [None] * (1 << k)
    S[0] = np.eye(mats[0].shape[0], dtype=dtype)
    # masks in increasing order visit every proper subset first
    for mask in range(1, 1 << k):
        acc = None
        for j in range(k):
            bit = 1 << j
            if mask & bit:
                term = S[mask ^ bit] @ mats[j]
                acc = term if acc is None else acc + term
        S[mask] = acc / bin(mask).count("1")
    return S[-1]


def symmetric_power(
    factors: Sequence,
    alpha: Sequence[int],
    mul: Callable,
    one,
    exact: bool = False,
):
    """Symmetric product of ``factors[j]`` repeated ``alpha[j]`` times.

    Works over any ring given ``mul`` and the unit ``one``.  Uses the
    multiset recursion ``S(b) = sum_j (b_j/|b|) S(b - e_j) a_j`` whose states
    are the sub-multi-indices of ``alpha``.  With ``exact=True`` the weights
    are Fractions.
    """
    alpha = check_multi_index(alpha)
    if len(factors) != len(alpha):
        raise ValueError("need one factor per multi-index entry")
    S = {(0,) * len(alpha): one}
    for beta in itertools.product(*(range(a + 1) for a in alpha)):
        k = sum(beta)
        if k == 0:
            continue
        acc = None
        for j, bj in enumerate(beta):
            if bj == 0:
                continue
            prev = list(beta)
            prev[j] -= 1
            w = Fraction(bj, k) if exact else bj / k
            term = mul(S[tuple(prev)], factors[j]) * w
            acc = term if acc is None else acc + term
        S[beta] = acc
    return S[tuple(alpha)]


# -- regular variables and V_alpha ------------------------------------------

def regular_variable(j: int, x) -> Multivector:
    """``e_j x0 - e0 x_j`` at the point ``x = (x0, ..., xn)``."""
    x = check_point(x)
    n = x.size - 1
    if not 1 <= j <= n:
        raise CliffordDimensionError(f"regular variable index {j} outside 1..{n}")
    return Multivector(n, {1 << (j - 1): float(x[0]), 0: -float(x[j])})


def v_poly_point(alpha, x) -> Multivector:
    """``V_alpha(x)`` as the symmetric power of regular-variable values."""
    x = check_point(x)
    n = x.size - 1
    alpha = check_multi_index(alpha, n)
    factors = [regular_variable(j, x) for j in range(1, n + 1)]
    return symmetric_power(factors, alpha, mv_mul, Multivector.scalar(n, 1.0))


def _regular_variable_poly(n: int, j: int) -> MVPolynomial:
    exps0 = [0] * (n + 1)
    exps0[0] = 1
    expsj = [0] * (n + 1)
    expsj[j] = 1
    return MVPolynomial(n, {(tuple(exps0), 1 << (j - 1)): 1, (tuple(expsj), 0): -1})


@lru_cache(maxsize=None)
def v_polynomial(alpha: tuple[int, ...]) -> MVPolynomial:
    """Exact (rational) polynomial form of ``V_alpha`` in ``x0..xn``."""
    alpha = check_multi_index(alpha)
    n = len(alpha)
    factors = [_regular_variable_poly(n, j) for j in range(1, n + 1)]
    one = MVPolynomial.monomial(n, (0,) * (n + 1), Fraction(1))
    return symmetric_power(factors, alpha, lambda a, b: a * b, one, exact=True)


def _dirac_space(p: MVPolynomial) -> MVPolynomial:
    # spatial Dirac operator sum_{l=1}^n e_l d/dx_l
    out = MVPolynomial(p.n)
    for l in range(1, p.n + 1):
        dp = p.derivative(l)
        if not dp.is_zero():
            out = out + dp.left_mul(Multivector.blade(p.n, [l]))
    return out


@lru_cache(maxsize=None)
def ck_polynomial(alpha: tuple[int, ...]) -> MVPolynomial:
    """``V_alpha`` rebuilt as the Cauchy-Kovalevskaya extension of ``x^alpha``.

    ``(-1)^|alpha| sum_j (-x0)^j / j! * Dx^j (x1^a1 ... xn^an)`` where ``Dx``
    is the spatial Dirac operator.  The sign prefactor matches the
    regular-variable convention ``e_j x0 - e0 x_j``.
    """
    alpha = check_multi_index(alpha)
    n = len(alpha)
    k = sum(alpha)
    g = MVPolynomial.monomial(n, (0,) + alpha, Fraction(1))
    x0 = MVPolynomial.variable(n, 0)
    out = MVPolynomial(n)
    power = MVPolynomial.monomial(n, (0,) * (n + 1), Fraction(1))
    for j in range(k + 1):
        out = out + power * g * Fraction((-1) ** j, math.factorial(j))
        g = _dirac_space(g)
        power = power * x0
    return out * (-1) ** k


def v_poly_ck(alpha, x) -> Multivector:
    x = check_point(x)
    alpha = check_multi_index(alpha, x.size - 1)
    return ck_polynomial(alpha)(x)


# -- operators ---------------------------------------------------------------

class OperatorTuple:
    """Immutable tuple ``(T_1, ..., T_m)`` of Hermitian ``d x d`` matrices."""

    def __init__(self, mats: Iterable, rtol: float | None = HERMITIAN_RTOL):
        checked = check_matrices(list(mats), rtol=rtol)
        for A in checked:
            A.setflags(write=False)
        self._mats = tuple(checked)

    @property
    def mats(self) -> tuple[np.ndarray, ...]:
        return self._mats

    @property
    def m(self) -> int:
        return len(self._mats)

    @property
    def d(self) -> int:
        return self._mats[0].shape[0]

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, i: int) -> np.ndarray:
        return self._mats[i]

    def __iter__(self):
        return iter(self._mats)

    def padded(self, n: int) -> list[np.ndarray]:
        """``(T_1, ..., T_m, I, ..., I)`` of length ``n``."""
        if n < self.m:
            raise ValueError(f"ambient dimension {n} is smaller than the tuple size {self.m}")
        eye = np.eye(self.d, dtype=complex)
        return list(self._mats) + [eye] * (n - self.m)

    def is_commuting(self, atol: float = 1e-12) -> bool:
        scale = max(1.0, max(np.linalg.norm(A, 2) for A in self._mats) ** 2)
        for A, B in itertools.combinations(self._mats, 2):
            if np.linalg.norm(A @ B - B @ A, 2) > atol * scale:
                return False
        return True

    def __repr__(self):
        return f"OperatorTuple(m={self.m}, d={self.d})"


def _as_tuple(T) -> OperatorTuple:
    return T if isinstance(T, OperatorTuple) else OperatorTuple(T)


def v_poly_operators(alpha, T, n: int | None = None) -> np.ndarray:
    """``V_alpha(T) = T_1^a1 x ... x T_m^am x I x ... x I`` (symmetric product).

    Indices beyond ``m`` are filled with the identity.
    """
    T = _as_tuple(T)
    n = T.m if n is None else n
    alpha = check_multi_index(alpha, n)
    factors = T.padded(n)
    return symmetric_power(factors, alpha, np.matmul, np.eye(T.d, dtype=complex))


# -- hyperholomorphic polynomials -------------------------------------------

class HyperPolynomial:
    """Finite sum ``f(x) = sum_alpha V_alpha(x) c_alpha`` with right coefficients."""

    def __init__(self, n: int, coeffs: Mapping[tuple[int, ...], Multivector] | None = None):
        self.n = n
        clean = {}
        for alpha, c in (coeffs or {}).items():
            alpha = check_multi_index(alpha, n)
            if not isinstance(c, Multivector):
                c = Multivector.scalar(n, c)
            if c.n != n:
                raise CliffordDimensionError(f"coefficient of {alpha} lives in Cl(0,{c.n}), expected {n}")
            if not c.is_zero():
                clean[alpha] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, alpha, coeff=None) -> "HyperPolynomial":
        alpha = tuple(alpha)
        n = len(alpha)
        c = Multivector.scalar(n, 1.0) if coeff is None else coeff
        return cls(n, {alpha: c})

    @classmethod
    def regular_variable(cls, n: int, j: int) -> "HyperPolynomial":
        alpha = [0] * n
        alpha[j - 1] = 1
        return cls.basis(alpha)

    @classmethod
    def constant(cls, n: int, value=1.0) -> "HyperPolynomial":
        return cls.basis((0,) * n, value if isinstance(value, Multivector) else Multivector.scalar(n, value))

    @classmethod
    def random(cls, n: int, degree: int, rng: np.random.Generator, density: float = 1.0) -> "HyperPolynomial":
        """Random polynomial of degree ``<= degree`` with Gaussian Clifford coefficients."""
        coeffs = {}
        for alpha in multi_indices_upto(n, degree):
            if rng.random() <= density:
                coeffs[alpha] = Multivector.from_dense(rng.standard_normal(1 << n), n)
        return cls(n, coeffs)

    def degree(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    def __add__(self, other: "HyperPolynomial") -> "HyperPolynomial":
        if other.n != self.n:
            raise CliffordDimensionError("dimension mismatch")
        coeffs = dict(self.coeffs)
        for a, c in other.coeffs.items():
            coeffs[a] = coeffs[a] + c if a in coeffs else c
        return HyperPolynomial(self.n, coeffs)

    def __mul__(self, scalar) -> "HyperPolynomial":
        return HyperPolynomial(self.n, {a: c * scalar for a, c in self.coeffs.items()})

    __rmul__ = __mul__

    @cached_property
    def polynomial(self) -> MVPolynomial:
        """The polynomial in ``x0..xn`` represented by this sum."""
        out = MVPolynomial(self.n)
        for alpha, c in self.coeffs.items():
            out = out + v_polynomial(alpha).right_mul(c)
        return out

    def __call__(self, x) -> Multivector:
        x = check_point(x, self.n)
        out = Multivector(self.n)
        for alpha, c in self.coeffs.items():
            out = out + v_poly_point(alpha, x) * c
        return out

    def evaluate_dense(self, points) -> np.ndarray:
        return self.polynomial.evaluate_dense(points)

    def __repr__(self):
        return f"HyperPolynomial(n={self.n}, terms={len(self.coeffs)}, degree={self.degree()})"
