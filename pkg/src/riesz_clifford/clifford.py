"""Arithmetic in the Clifford algebra Cl(0, n).

Basis blades are stored as bitmasks: bit ``j - 1`` set means the generator
``e_j`` occurs in the ordered product ``e_{j1} ... e_{jk}`` (``j1 < ... < jk``).
The empty mask is the unit ``e0``.  Every generator squares to ``-1``.

Coefficients may be any ring elements supporting ``+``, ``-`` and ``*``:
python ints, :class:`fractions.Fraction`, floats, complex numbers, or
square numpy arrays.  Two array coefficients are multiplied with ``@`` in
the order (left coefficient) times (right coefficient).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np


class CliffordDimensionError(ValueError):
    """Raised when blades or multivectors do not fit the algebra dimension."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_from_indices(indices: Iterable[int], n: int) -> int:
    """Bitmask of the ordered blade built from generator indices (1-based)."""
    bits = 0
    for j in indices:
        if not 1 <= j <= n:
            raise CliffordDimensionError(f"generator index {j} outside 1..{n}")
        if bits & (1 << (j - 1)):
            raise ValueError(f"repeated generator e{j}; use blade_mul to reduce products")
        bits |= 1 << (j - 1)
    return bits


def blade_indices(bits: int) -> tuple[int, ...]:
    """Generator indices (1-based, increasing) of a blade bitmask."""
    out = []
    j = 1
    while bits:
        if bits & 1:
            out.append(j)
        bits >>= 1
        j += 1
    return tuple(out)


def blade_name(bits: int) -> str:
    if bits == 0:
        return "e0"
    return "".join(f"e{j}" for j in blade_indices(bits))


def grade(bits: int) -> int:
    return _popcount(bits)


def _reorder_sign(a: int, b: int) -> int:
    # number of transpositions needed to move every generator of b past
    # the larger generators of a
    a >>= 1
    swaps = 0
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_mul(a: int, b: int, n: int) -> tuple[int, int]:
    """Product of two basis blades.

    Returns ``(sign, blade)`` such that ``e_a e_b = sign * e_blade``.
    """
    limit = 1 << n
    if not (0 <= a < limit and 0 <= b < limit):
        raise CliffordDimensionError(f"blade outside Cl(0,{n})")
    sign = _reorder_sign(a, b)
    # each shared generator contributes e_j^2 = -1
    if _popcount(a & b) & 1:
        sign = -sign
    return sign, a ^ b


def conjugate_sign(bits: int) -> int:
    """Sign acquired by a blade under Clifford conjugation.

    Reversal gives ``(-1)^(k(k-1)/2)``, negating generators ``(-1)^k``.
    """
    k = _popcount(bits)
    return -1 if (k * (k + 1) // 2) & 1 else 1


@lru_cache(maxsize=None)
def product_tensor(n: int) -> np.ndarray:
    """Structure constants ``M[i, j, k]`` with ``e_i e_j = sum_k M[i, j, k] e_k``."""
    size = 1 << n
    M = np.zeros((size, size, size))
    for i in range(size):
        for j in range(size):
            s, k = blade_mul(i, j, n)
            M[i, j, k] = s
    M.setflags(write=False)
    return M


def dense_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Geometric product of dense multivector arrays, batched over leading axes.

    Both arrays have the blade axis last (length ``2**n``).
    """
    return np.einsum("...i,...j,ijk->...k", a, b, product_tensor(n))


def _is_zero(c) -> bool:
    if isinstance(c, np.ndarray):
        return not c.any()
    return c == 0


def _cmul(a, b):
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a @ b
    return a * b


class Multivector:
    """Element of Cl(0, n) with coefficients in an arbitrary ring.

    Instances are treated as immutable; arithmetic returns new objects.
    Zero coefficients are never stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        if n < 0:
            raise CliffordDimensionError("dimension must be nonnegative")
        self.n = n
        limit = 1 << n
        clean = {}
        for bits, c in (terms or {}).items():
            if not 0 <= bits < limit:
                raise CliffordDimensionError(f"blade {bits:#b} outside Cl(0,{n})")
            if not _is_zero(c):
                clean[bits] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, n: int, value=1) -> "Multivector":
        return cls(n, {0: value})

    @classmethod
    def blade(cls, n: int, indices: Iterable[int] = (), coeff=1) -> "Multivector":
        return cls(n, {blade_from_indices(indices, n): coeff})

    @classmethod
    def vector(cls, coords: Iterable) -> "Multivector":
        """``x0 e0 + x1 e1 + ... + xn en`` from the ``n + 1`` coordinates."""
        coords = list(coords)
        n = len(coords) - 1
        terms = {0: coords[0]}
        for j in range(1, n + 1):
            terms[1 << (j - 1)] = coords[j]
        return cls(n, terms)

    @classmethod
    def from_dense(cls, arr: np.ndarray, n: int) -> "Multivector":
        arr = np.asarray(arr)
        if arr.shape[0] != 1 << n:
            raise CliffordDimensionError("leading axis must have length 2**n")
        if arr.ndim == 1:
            return cls(n, {k: arr[k].item() for k in range(arr.shape[0])})
        return cls(n, {k: np.array(arr[k]) for k in range(arr.shape[0])})

    # -- queries ----------------------------------------------------------
    def __getitem__(self, bits: int):
        return self.terms.get(bits, 0)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(b == 0 for b in self.terms)

    def scalar_part(self):
        return self.terms.get(0, 0)

    def to_dense(self, shape: tuple[int, ...] = (), dtype=float) -> np.ndarray:
        """Dense array with the blade axis first.

        ``shape`` is the coefficient shape: ``()`` for scalars, ``(d, d)`` for
        matrix coefficients.  It is inferred from stored arrays when possible.
        """
        for c in self.terms.values():
            if isinstance(c, np.ndarray):
                shape = c.shape
                if np.iscomplexobj(c):
                    dtype = complex
            elif isinstance(c, complex):
                dtype = complex
        out = np.zeros((1 << self.n,) + tuple(shape), dtype=dtype)
        for k, c in self.terms.items():
            out[k] = c
        return out

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Multivector") -> None:
        if other.n != self.n:
            raise CliffordDimensionError(f"dimension mismatch: Cl(0,{self.n}) vs Cl(0,{other.n})")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.n, other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Multivector(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mv_mul(self, other)
        return Multivector(self.n, {k: _cmul(c, other) for k, c in self.terms.items()})

    def __rmul__(self, other):
        return Multivector(self.n, {k: _cmul(other, c) for k, c in self.terms.items()})

    def __truediv__(self, other):
        return Multivector(self.n, {k: c / other for k, c in self.terms.items()})

    def conjugate(self) -> "Multivector":
        return conjugate(self)

    def map(self, fn) -> "Multivector":
        """Apply ``fn`` to every coefficient."""
        return Multivector(self.n, {k: fn(c) for k, c in self.terms.items()})

    # -- comparisons ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, np.ndarray):
            return NotImplemented
        if not isinstance(other, Multivector):
            other = Multivector.scalar(self.n, other)
        if other.n != self.n or other.terms.keys() != self.terms.keys():
            return False
        return all(np.array_equal(c, other.terms[k]) for k, c in self.terms.items())

    __hash__ = None

    def norm_inf(self) -> float:
        """Largest absolute coefficient entry (coefficient-wise sup norm)."""
        return max((float(np.max(np.abs(c))) for c in self.terms.values()), default=0.0)

    def allclose(self, other: "Multivector", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        diff = (self - other).norm_inf()
        scale = max(self.norm_inf(), other.norm_inf())
        return diff <= atol + rtol * scale

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            if isinstance(c, np.ndarray):
                parts.append(f"<{c.shape[0]}x{c.shape[1]}>*{blade_name(k)}")
            else:
                parts.append(f"{c}*{blade_name(k)}")
        return " + ".join(parts)


def mv_mul(x: Multivector, y: Multivector) -> Multivector:
    """Geometric product, bilinear over the coefficient ring."""
    x._check(y)
    n = x.n
    terms: dict[int, object] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            s, k = blade_mul(a, b, n)
            c = _cmul(ca, cb)
            c = c if s > 0 else -c
            terms[k] = terms[k] + c if k in terms else c
    return Multivector(n, terms)


def conjugate(x: Multivector) -> Multivector:
    """Clifford conjugation: reverse each blade and negate its generators."""
    return Multivector(x.n, {k: (c if conjugate_sign(k) > 0 else -c) for k, c in x.terms.items()})


class GeneratorRep:
    """Complex matrices ``E_1..E_n`` realizing the generators of Cl(0, n).

    Each ``E_j`` is anti-Hermitian with ``E_j^2 = -I``; distinct generators
    anticommute.  The representation has dimension ``2**ceil(n/2)`` and is
    faithful on the real algebra.
    """

    def __init__(self, n: int, mats: list[np.ndarray]):
        self.n = n
        self.mats = mats
        self.dim_rep = mats[0].shape[0] if mats else 1

    def blade_matrix(self, bits: int) -> np.ndarray:
        out = np.eye(self.dim_rep, dtype=complex)
        for j in blade_indices(bits):
            out = out @ self.mats[j - 1]
        return out

    def represent(self, x: Multivector) -> np.ndarray:
        """Matrix of ``x`` acting on ``H (x) H0``.

        Matrix coefficients ``A`` contribute ``kron(A, E_blade)``.
        """
        if x.n != self.n:
            raise CliffordDimensionError("multivector dimension does not match representation")
        d = None
        for c in x.terms.values():
            if isinstance(c, np.ndarray):
                d = c.shape[0]
        if d is None:
            out = np.zeros((self.dim_rep, self.dim_rep), dtype=complex)
            for k, c in x.terms.items():
                out += c * self.blade_matrix(k)
            return out
        out = np.zeros((d * self.dim_rep, d * self.dim_rep), dtype=complex)
        for k, c in x.terms.items():
            c = c if isinstance(c, np.ndarray) else c * np.eye(d)
            out += np.kron(c, self.blade_matrix(k))
        return out


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@lru_cache(maxsize=None)
def _hermitian_gammas(k: int) -> tuple[np.ndarray, ...]:
    # 2k+1 pairwise anticommuting Hermitian involutions of size 2**k
    if k == 0:
        return (np.eye(1, dtype=complex),)
    prev = _hermitian_gammas(k - 1)
    eye = np.eye(1 << (k - 1), dtype=complex)
    return tuple(np.kron(_SX, g) for g in prev) + (np.kron(_SY, eye), np.kron(_SZ, eye))


def generator_matrices(n: int) -> GeneratorRep:
    """Deterministic faithful representation of Cl(0, n) by Kronecker doubling."""
    if n < 1:
        raise CliffordDimensionError("need at least one generator")
    k = (n + 1) // 2
    gammas = _hermitian_gammas(k)
    return GeneratorRep(n, [1j * g for g in gammas[:n]])


def mv_norm_bound(x: Multivector) -> float:
    """Sum of spectral norms of the coefficients.

    Upper bound for the operator norm of ``x`` on ``H (x) H0`` since every
    blade acts unitarily.
    """
    total = 0.0
    for c in x.terms.values():
        if isinstance(c, np.ndarray):
            total += float(np.linalg.norm(c, 2))
        else:
            total += abs(c)
    return total
