"""Symmetric (Weyl) quantization of classical polynomials and related identities."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.linalg import expm

from .clifford import Multivector, blade_indices, blade_from_indices
from .polyspace import HyperPolynomial, OperatorTuple, symmetric_power
from .validation import check_multi_index, check_square_matrix


class PolynomialSyntaxError(ValueError):
    """Parse failure in a polynomial expression; ``position`` is 0-based."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


@dataclass(frozen=True)
class ClassicalPolynomial:
    """Real polynomial in commuting variables ``x1..xm``."""

    m: int
    terms: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        clean = {}
        for alpha, c in self.terms.items():
            alpha = check_multi_index(alpha, self.m)
            if c != 0:
                clean[alpha] = clean.get(alpha, 0.0) + float(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "ClassicalPolynomial":
        return parse_polynomial(text, m)

    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def __call__(self, t) -> float:
        t = np.asarray(t, dtype=float)
        return float(sum(c * np.prod(t ** np.array(a)) for a, c in self.terms.items()))

    def to_hyper(self, n: int | None = None) -> HyperPolynomial:
        """Replace each monomial ``x^alpha`` by ``V_alpha`` with coefficient ``c * e0``.

        Indices beyond ``m`` (when ``n > m``) get exponent zero.
        """
        n = self.m if n is None else n
        if n < self.m:
            raise ValueError(f"ambient dimension {n} is smaller than {self.m}")
        pad = (0,) * (n - self.m)
        return HyperPolynomial(n, {a + pad: Multivector.scalar(n, c) for a, c in self.terms.items()})


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^]))")


def parse_polynomial(text: str, m: int | None = None) -> ClassicalPolynomial:
    """Parse expressions such as ``"2.5 x1^2 x3 - x2"``.

    Factors inside a term may be separated by whitespace or ``*``.  The
    number of variables is the largest index used unless ``m`` is given.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        start = mt.start(mt.lastgroup)
        if mt.group("num") is not None:
            tokens.append(("num", float(mt.group("num")), start))
        elif mt.group("var") is not None:
            idx = int(mt.group("idx"))
            if idx < 1:
                raise PolynomialSyntaxError("variable indices start at x1", text, start)
            tokens.append(("var", idx, start))
        else:
            tokens.append(("op", mt.group("op"), start))
        pos = mt.end()
    end = len(text)
    if not tokens:
        raise PolynomialSyntaxError("empty polynomial", text, 0)

    terms: dict[tuple[int, ...], float] = {}
    i = 0
    raw: list[tuple[float, dict[int, int]]] = []
    expect_term = True
    sign = 1.0
    while i < len(tokens):
        kind, val, at = tokens[i]
        if kind == "op" and val in "+-":
            sign = sign * (-1.0 if val == "-" else 1.0)
            i += 1
            expect_term = True
            continue
        if not expect_term:
            raise PolynomialSyntaxError("expected '+' or '-'", text, at)
        coeff, powers, i = _parse_term(tokens, i, text, end)
        raw.append((sign * coeff, powers))
        sign = 1.0
        expect_term = False
    if expect_term:
        raise PolynomialSyntaxError("dangling operator", text, end)

    top = max((max(p, default=0) for _, p in raw), default=0)
    if m is None:
        m = max(top, 1)
    elif top > m:
        raise ValueError(f"polynomial uses x{top} but only {m} variables are available")
    for coeff, powers in raw:
        alpha = tuple(powers.get(j, 0) for j in range(1, m + 1))
        terms[alpha] = terms.get(alpha, 0.0) + coeff
    return ClassicalPolynomial(m, terms)


def _parse_term(tokens, i, text, end):
    coeff = 1.0
    powers: dict[int, int] = {}
    seen = False
    need_factor = False
    while i < len(tokens):
        kind, val, at = tokens[i]
        if kind == "num":
            coeff *= val
            i += 1
        elif kind == "var":
            i += 1
            exp = 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "^":
                nxt = tokens[i + 1] if i + 1 < len(tokens) else None
                if nxt is None or nxt[0] != "num" or not float(nxt[1]).is_integer():
                    where = nxt[2] if nxt is not None else end
                    raise PolynomialSyntaxError("expected a nonnegative integer exponent", text, where)
                exp = int(nxt[1])
                i += 2
            powers[val] = powers.get(val, 0) + exp
        elif kind == "op" and val == "*":
            if not seen:
                raise PolynomialSyntaxError("'*' without a left factor", text, at)
            need_factor = True
            i += 1
            continue
        elif kind == "op" and val == "^":
            raise PolynomialSyntaxError("'^' must follow a variable", text, at)
        else:
            break
        seen = True
        need_factor = False
    if need_factor:
        where = tokens[i][2] if i < len(tokens) else end
        raise PolynomialSyntaxError("expected a factor after '*'", text, where)
    if not seen:
        where = tokens[i][2] if i < len(tokens) else end
        raise PolynomialSyntaxError("expected a number or variable", text, where)
    return coeff, powers, i


def _tuple(T) -> OperatorTuple:
    return T if isinstance(T, OperatorTuple) else OperatorTuple(T)


def quantize(p: ClassicalPolynomial, T) -> np.ndarray:
    """``sum_alpha c_alpha T^{x alpha}``: each monomial becomes a symmetric product."""
    T = _tuple(T)
    if p.m != T.m:
        raise ValueError(f"polynomial has {p.m} variables but {T.m} operators were given")
    out = np.zeros((T.d, T.d), dtype=complex)
    eye = np.eye(T.d, dtype=complex)
    for alpha, c in p.terms.items():
        out += c * symmetric_power(list(T), alpha, np.matmul, eye)
    return out


def jordan_product(A, B) -> np.ndarray:
    """``(AB + BA) / 2``."""
    A = check_square_matrix(A, "A")
    B = check_square_matrix(B, "B")
    if A.shape != B.shape:
        raise ValueError("Jordan product of matrices with different shapes")
    return (A @ B + B @ A) / 2


def jordan_square_form(A, B) -> np.ndarray:
    """``((A + B)/2)^2 - ((A - B)/2)^2``, an alternative form of the Jordan product."""
    A = check_square_matrix(A, "A")
    B = check_square_matrix(B, "B")
    S, D = (A + B) / 2, (A - B) / 2
    return S @ S - D @ D


# First triple with associator norm > 0.1 in a seeded scan of 2x2 real
# symmetric matrices with entries in {-1, 0, 1}; the norm is 0.5.
WITNESS_TRIPLE = (
    np.array([[-1, -1], [-1, -1]], dtype=complex),
    np.array([[1, 1], [1, 1]], dtype=complex),
    np.array([[-1, 0], [0, 0]], dtype=complex),
)


def jordan_nonassociativity_witness(A=None, B=None, C=None) -> float:
    """``||(A o B) o C - A o (B o C)||_2``; defaults to :data:`WITNESS_TRIPLE`."""
    if A is None:
        A, B, C = WITNESS_TRIPLE
    return float(np.linalg.norm(jordan_product(jordan_product(A, B), C) - jordan_product(A, jordan_product(B, C)), 2))


# central difference stencils (offset, weight) for derivatives of order 0..4,
# each with O(h^2) error
_STENCILS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _mixed_difference(fn, alpha, h: float) -> np.ndarray:
    grids = [_STENCILS[a] for a in alpha]
    total = None
    for combo in itertools.product(*grids):
        t = np.array([off * h for off, _ in combo])
        w = np.prod([wt for _, wt in combo])
        term = w * fn(t)
        total = term if total is None else total + term
    return total / h ** sum(alpha)


def exp_mixed_derivative(alpha, T, step: float = 1e-2, richardson: bool = True) -> np.ndarray:
    """Finite-difference ``d^alpha exp(sum_j t_j T_j)`` at ``t = 0``.

    Tensor-product central differences with O(h^2) error; with
    ``richardson`` the steps ``h`` and ``h/2`` are combined to O(h^4).
    """
    T = _tuple(T)
    alpha = check_multi_index(alpha, T.m)
    if sum(alpha) > 4:
        raise ValueError("mixed derivatives are supported up to total order 4")
    mats = np.stack(list(T))

    def fn(t):
        return expm(np.tensordot(t, mats, axes=1))

    coarse = _mixed_difference(fn, alpha, step)
    if not richardson:
        return coarse
    fine = _mixed_difference(fn, alpha, step / 2)
    return (4 * fine - coarse) / 3


def weyl_exponential_check(alpha, T, step: float = 1e-2, richardson: bool = True) -> float:
    """Spectral-norm gap between ``d^alpha exp(sum t_j T_j)|_0`` and ``T^{x alpha}``."""
    if not 1e-3 <= step <= 1e-1:
        raise ValueError("step must lie in [1e-3, 1e-1]")
    T = _tuple(T)
    alpha = check_multi_index(alpha, T.m)
    target = symmetric_power(list(T), alpha, np.matmul, np.eye(T.d, dtype=complex))
    approx = exp_mixed_derivative(alpha, T, step, richardson)
    return float(np.linalg.norm(approx - target, 2))


@dataclass(frozen=True, order=True)
class FillingState:
    """Occupied single-particle states; at most one fermion per state."""

    occupation: frozenset[int]

    @classmethod
    def from_blade(cls, bits: int) -> "FillingState":
        return cls(frozenset(blade_indices(bits)))

    def to_blade(self, n: int) -> int:
        return blade_from_indices(sorted(self.occupation), n)

    def __repr__(self):
        inside = ",".join(str(j) for j in sorted(self.occupation))
        return f"FillingState({{{inside}}})"


def fermi_distribution(a: Multivector, convention: str = "squared") -> dict[FillingState, float]:
    """Probabilities of filling states read off a real multivector.

    ``convention="squared"`` uses ``a_B^2 / sum a^2``; ``"linear"`` uses
    ``|a_B| / sum |a|``.
    """
    if a.is_zero():
        raise ValueError("the zero multivector carries no distribution")
    if convention == "squared":
        weights = {b: abs(c) ** 2 for b, c in a.terms.items()}
    elif convention == "linear":
        weights = {b: abs(c) for b, c in a.terms.items()}
    else:
        raise ValueError(f"unknown convention {convention!r}")
    total = sum(weights.values())
    return {FillingState.from_blade(b): w / total for b, w in sorted(weights.items())}


def ladder_operators(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated harmonic-oscillator pair ``(Q, P)`` with ``hbar = 1``.

    ``[Q, P] = i I`` holds on the leading ``(d-1) x (d-1)`` block only.
    """
    a = np.diag(np.sqrt(np.arange(1, d)), k=1).astype(complex)
    Q = (a + a.conj().T) / np.sqrt(2)
    P = 1j * (a.conj().T - a) / np.sqrt(2)
    return Q, P
