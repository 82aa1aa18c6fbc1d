"""Hyperholomorphic functional calculus for tuples of Hermitian matrices.

Two independent routes compute ``f(T)`` for ``f = sum V_alpha c_alpha``:

* :func:`calculus_taylor` substitutes ``V_alpha(T)`` (symmetric products of
  the ``T_j``) into the expansion;
* :func:`calculus_integral` integrates the operator Cauchy kernel
  ``E(y, T) = sum V_alpha(T) W_alpha(y)`` against ``dsigma_y f(y)`` over a
  sphere enclosing the Clifford spectral set.

:func:`commuting_oracle` is a third, spectral route valid for commuting tuples.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from .clifford import Multivector, mv_norm_bound, product_tensor
from .kernels import sphere_rule, w_dense, w_on_rule
from .polyspace import HyperPolynomial, OperatorTuple, multi_indices, multi_indices_upto, v_poly_operators
from .validation import check_point

log = logging.getLogger(__name__)

_CHUNK = 8192


class SpectralBoundError(ValueError):
    """Raised when an integration sphere does not enclose the spectral bound."""


class ConvergenceWarning(UserWarning):
    """Per-degree norms of the operator kernel fail to decay."""


@dataclass(frozen=True)
class OperatorKernelConfig:
    """Settings for the integral route.

    ``radius=None`` selects ``radius_factor * spectral_radius_bound(T)``
    (or 1 when the bound vanishes); ``truncation=None`` uses the degree of
    the integrand.
    """

    truncation: int | None = None
    radius: float | None = None
    quad_order: int = 32
    tol: float = 1e-6
    radius_factor: float = 2.0

    def __post_init__(self):
        if self.truncation is not None and self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        if self.quad_order < 2:
            raise ValueError("quad_order must be at least 2")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive")

    def resolve_radius(self, bound: float) -> float:
        if self.radius is not None:
            return float(self.radius)
        return self.radius_factor * bound if bound > 0 else 1.0


@dataclass
class CalculusResult:
    """``f(T)`` as a multivector with matrix coefficients plus diagnostics."""

    value: Multivector
    diagnostics: dict = field(default_factory=dict)

    # quadrature leaves round-off in the non-scalar parts
    collapse_rtol = 1e-12

    @property
    def is_matrix(self) -> bool:
        """True when every part except ``e0`` is zero up to ``collapse_rtol``."""
        if self.value.is_scalar():
            return True
        scale = max(1.0, float(np.max(np.abs(self.value.scalar_part()))))
        return all(float(np.max(np.abs(c))) <= self.collapse_rtol * scale
                   for b, c in self.value if b != 0)

    @property
    def matrix(self) -> np.ndarray:
        """The plain matrix when every Clifford part except ``e0`` vanishes."""
        if not self.is_matrix:
            raise ValueError("result has non-scalar Clifford parts; use .value")
        c = self.value.scalar_part()
        if isinstance(c, np.ndarray):
            return c
        d = self.diagnostics.get("d")
        return np.zeros((d, d), dtype=complex)

    def dense(self) -> np.ndarray:
        return self.value.to_dense(shape=(self.diagnostics["d"],) * 2, dtype=complex)

    def to_dict(self) -> dict:
        from .serialize import result_to_dict

        return result_to_dict(self)


def _as_tuple(T) -> OperatorTuple:
    return T if isinstance(T, OperatorTuple) else OperatorTuple(T)


def spectral_radius_bound(T) -> float:
    """``|T| = max_j ||T_j||_2``."""
    T = _as_tuple(T)
    return max(float(np.linalg.norm(A, 2)) for A in T)


def relative_difference(a: Multivector, b: Multivector, d: int) -> float:
    """Frobenius distance of two matrix multivectors relative to ``b``."""
    A = a.to_dense(shape=(d, d), dtype=complex)
    B = b.to_dense(shape=(d, d), dtype=complex)
    scale = np.linalg.norm(B)
    diff = np.linalg.norm(A - B)
    return float(diff / scale) if scale > 0 else float(diff)


def _matrix_multivector(n: int, dense: np.ndarray) -> Multivector:
    return Multivector(n, {k: np.array(dense[k]) for k in range(dense.shape[0])})


def _ambient_dimension(T: OperatorTuple, n: int | None) -> int:
    n = T.m if n is None else n
    if n < T.m:
        raise ValueError(f"ambient dimension {n} cannot host {T.m} operators")
    return n


def _operator_basis(T: OperatorTuple, n: int, J: int):
    alphas = multi_indices_upto(n, J)
    VT = np.stack([v_poly_operators(a, T, n) for a in alphas])
    return alphas, VT


def _degree_slices(n: int, J: int) -> list[slice]:
    out, start = [], 0
    for j in range(J + 1):
        size = len(multi_indices(n, j))
        out.append(slice(start, start + size))
        start += size
    return out


def _kernel_degree_norms(W_all, VT, n: int, J: int, probes: int) -> list[float]:
    # max over a spread of nodes of the norm bound of each degree's kernel term
    N = W_all[0].shape[0]
    idx = np.linspace(0, N - 1, min(probes, N)).astype(int)
    W = np.stack([Wa[idx] for Wa in W_all])  # (nb, P, B)
    out = []
    for sl in _degree_slices(n, J):
        block = np.einsum("bpi,bde->pide", W[sl], VT[sl])
        out.append(float(np.max(np.linalg.norm(block, ord=2, axis=(2, 3)).sum(axis=1))))
    return out


def _decay_rate(norms) -> float:
    """Geometric rate fitted to the tail (degrees >= 1) of a norm sequence."""
    norms = np.asarray(norms, dtype=float)
    tail = norms[max(1, len(norms) // 2):]
    if tail.size < 2 or not np.any(tail > 0):
        return 0.0
    floor = max(np.max(tail) * 1e-300, np.finfo(float).tiny)
    logs = np.log(np.maximum(tail, floor))
    slope = np.polyfit(np.arange(tail.size), logs, 1)[0]
    return float(np.exp(slope))


def operator_cauchy_kernel(y, T, cfg: OperatorKernelConfig | int = 8, n: int | None = None) -> CalculusResult:
    """Truncated ``E(y, T) = sum_{|alpha| <= J} V_alpha(T) W_alpha(y)``.

    ``cfg`` is either a config (its ``truncation`` is used, default 8) or
    the truncation degree itself.  Diagnostics hold the norm bound of each
    degree's contribution; a :class:`ConvergenceWarning` is issued when
    they do not decay.
    """
    T = _as_tuple(T)
    y = check_point(y)
    n = _ambient_dimension(T, y.size - 1 if n is None else n)
    if y.size != n + 1:
        raise ValueError(f"point must have {n + 1} coordinates")
    if not np.any(y):
        raise ValueError("operator kernel is singular at y = 0")
    J = cfg if isinstance(cfg, int) else (8 if cfg.truncation is None else cfg.truncation)
    alphas, VT = _operator_basis(T, n, J)
    W = np.stack([w_dense(a, y[None, :])[0] for a in alphas])  # (nb, B)
    terms = np.einsum("bi,bde->bide", W, VT)
    value = terms.sum(axis=0)
    degree_norms = []
    for sl in _degree_slices(n, J):
        degree_norms.append(mv_norm_bound(_matrix_multivector(n, terms[sl].sum(axis=0))))
    bound = spectral_radius_bound(T)
    rate = _decay_rate(degree_norms)
    if J >= 2 and rate >= 1.0:
        warnings.warn(
            f"operator kernel terms do not decay at |y| = {np.linalg.norm(y):.3g} (fitted rate {rate:.3g})",
            ConvergenceWarning,
            stacklevel=2,
        )
    diag = {
        "truncation": J,
        "d": T.d,
        "n": n,
        "degree_norms": degree_norms,
        "decay_rate": rate,
        "spectral_bound": bound,
        "abs_y": float(np.linalg.norm(y)),
    }
    return CalculusResult(_matrix_multivector(n, value), diag)


@dataclass
class ProbeReport:
    """Per-degree norms of the operator kernel series at one point."""

    y: np.ndarray
    degrees: list[int]
    term_norms: list[float]
    partial_norms: list[float]
    rate: float
    verdict: str

    def rows(self):
        r = float(np.linalg.norm(self.y))
        for j, t, p in zip(self.degrees, self.term_norms, self.partial_norms):
            yield r, j, t, p, self.verdict


def resolvent_probe(y, T, J: int = 12, n: int | None = None) -> ProbeReport:
    """Empirical convergence test of the kernel series at ``y``.

    The verdict is ``"converging"`` when the geometric rate fitted to the
    tail of the term norms is below one, ``"diverging"`` otherwise.
    """
    T = _as_tuple(T)
    y = check_point(y)
    n = _ambient_dimension(T, y.size - 1 if n is None else n)
    alphas, VT = _operator_basis(T, n, J)
    W = np.stack([w_dense(a, y[None, :])[0] for a in alphas])
    terms = np.einsum("bi,bde->bide", W, VT)
    partial = np.zeros(terms.shape[1:], dtype=complex)
    term_norms, partial_norms = [], []
    for sl in _degree_slices(n, J):
        block = terms[sl].sum(axis=0)
        partial = partial + block
        term_norms.append(mv_norm_bound(_matrix_multivector(n, block)))
        partial_norms.append(mv_norm_bound(_matrix_multivector(n, partial)))
    rate = _decay_rate(term_norms)
    verdict = "converging" if rate < 1.0 else "diverging"
    return ProbeReport(y, list(range(J + 1)), term_norms, partial_norms, rate, verdict)


def calculus_taylor(f: HyperPolynomial, T) -> CalculusResult:
    """``f(T) = sum_alpha V_alpha(T) c_alpha`` (exact for polynomials)."""
    T = _as_tuple(T)
    n = _ambient_dimension(T, f.n)
    dense = np.zeros((1 << n, T.d, T.d), dtype=complex)
    per_degree = [0.0] * (f.degree() + 1)
    for alpha, c in f.coeffs.items():
        V = v_poly_operators(alpha, T, n)
        coeffs = c.to_dense()
        dense += coeffs[:, None, None] * V[None, :, :]
        per_degree[sum(alpha)] += float(np.linalg.norm(V, 2)) * float(np.abs(coeffs).sum())
    diag = {
        "route": "taylor",
        "d": T.d,
        "n": n,
        "degree": f.degree(),
        "degree_norms": per_degree,
        "truncation_error": 0.0,
    }
    return CalculusResult(_matrix_multivector(n, dense), diag)


def calculus_taylor_series(
    coefficients: Callable[[tuple[int, ...]], Multivector] | Mapping[tuple[int, ...], Multivector],
    T,
    n: int,
    degree: int,
    tail_degrees: int = 8,
) -> CalculusResult:
    """Truncated Taylor evaluation of a (possibly infinite) coefficient stream.

    Degrees up to ``degree`` are summed; the reported ``tail_bound`` is
    ``sum ||c_alpha||_1 |T|^|alpha|`` over the next ``tail_degrees`` degrees,
    which bounds the neglected terms since ``||V_alpha(T)|| <= |T|^|alpha|``.
    """
    T = _as_tuple(T)
    get = coefficients.get if isinstance(coefficients, Mapping) else coefficients
    coeffs = {}
    for a in multi_indices_upto(n, degree):
        c = get(a)
        if c is not None:
            coeffs[a] = c
    result = calculus_taylor(HyperPolynomial(n, coeffs), T)
    bound = spectral_radius_bound(T)
    tail = 0.0
    for k in range(degree + 1, degree + tail_degrees + 1):
        for a in multi_indices(n, k):
            c = get(a)
            if c is not None:
                cm = c if isinstance(c, Multivector) else Multivector.scalar(n, c)
                tail += float(np.abs(cm.to_dense()).sum()) * bound**k
    result.diagnostics.update(route="taylor-series", truncation=degree, tail_bound=tail, truncation_error=tail)
    return result


def calculus_integral(f: HyperPolynomial, T, cfg: OperatorKernelConfig | None = None) -> CalculusResult:
    """``f(T) = int_{S^n(0,r)} E(y, T) dsigma_y f(y)`` by product quadrature.

    The node sum is reorganised as ``sum_beta V_beta(T) * sum_y W_beta(y)
    dsigma_y f(y)``, which is the same finite sum with the operator factors
    pulled out of the node loop.
    """
    cfg = cfg or OperatorKernelConfig()
    T = _as_tuple(T)
    n = _ambient_dimension(T, f.n)
    bound = spectral_radius_bound(T)
    r = cfg.resolve_radius(bound)
    if r <= bound:
        raise SpectralBoundError(f"radius below spectral bound ({r:.6g} <= {bound:.6g})")
    J = f.degree() if cfg.truncation is None else cfg.truncation
    if J < f.degree():
        raise ValueError(f"truncation {J} is below the degree {f.degree()} of f")
    rule = sphere_rule(n, r, cfg.quad_order)
    alphas, VT = _operator_basis(T, n, J)
    B = 1 << n
    W_all = [w_on_rule(a, rule) for a in alphas]
    ds_all = rule.dsigma_dense()
    S = np.zeros((len(alphas), B, B))
    # fixed chunk order keeps the reduction reproducible
    for start in range(0, len(rule), _CHUNK):
        sl = slice(start, start + _CHUNK)
        G = np.einsum("ni,nj,ijk->nk", ds_all[sl], f.evaluate_dense(rule.nodes[sl]), product_tensor(n))
        W = np.stack([Wa[sl] for Wa in W_all])  # (nb, N, B)
        S += np.einsum("bni,nj->bij", W, G)
    C = np.einsum("bij,ijk->bk", S, product_tensor(n))
    dense = np.einsum("bk,bde->kde", C, VT)
    degree_norms = _kernel_degree_norms(W_all, VT, n, J, probes=rule.order)
    rate = _decay_rate(degree_norms)
    if J >= 2 and rate >= 1.0:
        warnings.warn(f"kernel terms do not decay on S^{n}(0,{r:.3g})", ConvergenceWarning, stacklevel=2)
    diag = {
        "route": "integral",
        "d": T.d,
        "n": n,
        "radius": r,
        "quad_order": cfg.quad_order,
        "nodes": len(rule),
        "truncation": J,
        "spectral_bound": bound,
        "degree_norms": degree_norms,
        "decay_rate": rate,
        # higher kernel degrees integrate to zero against a degree-J polynomial
        "truncation_error": 0.0,
    }
    return CalculusResult(_matrix_multivector(n, dense), diag)


def vanishing_check(f: HyperPolynomial, T, r_inner: float, r_outer: float,
                    cfg: OperatorKernelConfig | None = None) -> float:
    """Norm bound of the difference of the integral route on two spheres.

    Both spheres must enclose the spectral bound; the difference is the
    integral over the boundary of the annulus between them.
    """
    cfg = cfg or OperatorKernelConfig()
    T = _as_tuple(T)
    bound = spectral_radius_bound(T)
    if not (bound < r_inner < r_outer):
        raise SpectralBoundError(f"need spectral bound {bound:.6g} < r_inner < r_outer")
    inner = calculus_integral(f, T, replace(cfg, radius=r_inner))
    outer = calculus_integral(f, T, replace(cfg, radius=r_outer))
    return mv_norm_bound(outer.value - inner.value)


def _joint_eigenbasis(T: OperatorTuple, atol: float):
    # a generic real combination separates the joint eigenspaces
    weights = np.sqrt(np.arange(2, T.m + 2, dtype=float)) * np.pi
    combo = sum(w * A for w, A in zip(weights, T))
    _, U = np.linalg.eigh(combo)
    eig = []
    for A in T:
        D = U.conj().T @ A @ U
        off = D - np.diag(np.diag(D))
        if np.linalg.norm(off) > atol * max(1.0, np.linalg.norm(A)):
            raise ValueError("failed to diagonalize the tuple simultaneously")
        eig.append(np.real(np.diag(D)))
    return U, np.array(eig)


def commuting_oracle(f: HyperPolynomial, T, atol: float = 1e-10) -> CalculusResult:
    """Spectral evaluation of ``f(T)`` for a commuting tuple.

    Diagonalizes the tuple jointly and evaluates ``sum_alpha t^alpha c_alpha``
    at each joint eigenvalue ``t``.  Refuses non-commuting input.
    """
    T = _as_tuple(T)
    if not T.is_commuting(atol=1e-12):
        raise ValueError("commuting_oracle requires pairwise commuting operators")
    n = _ambient_dimension(T, f.n)
    U, t = _joint_eigenbasis(T, atol)
    t = np.vstack([t, np.ones((n - T.m, T.d))])  # padded entries act as I
    dense = np.zeros((1 << n, T.d, T.d), dtype=complex)
    for alpha, c in f.coeffs.items():
        mono = np.prod(t ** np.array(alpha)[:, None], axis=0)
        D = (U * mono[None, :]) @ U.conj().T
        dense += c.to_dense()[:, None, None] * D[None]
    diag = {"route": "commuting-oracle", "d": T.d, "n": n, "joint_eigenvalues": t.T.tolist()}
    return CalculusResult(_matrix_multivector(n, dense), diag)
