"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numbers

import numpy as np

HERMITIAN_RTOL = 1e-12


class HermiticityError(ValueError):
    """Raised when an operator tuple contains non-self-adjoint matrices.

    ``violations`` lists ``(index, residual)`` for every offending matrix.
    """

    def __init__(self, violations: list[tuple[int, float]]):
        self.violations = violations
        detail = ", ".join(f"T{i + 1}: |T - T*| = {r:.3g}" for i, r in violations)
        super().__init__(f"operators are not Hermitian ({detail})")


def hermitian_residual(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - A.conj().T, 2))


def check_square_matrix(A, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A.astype(complex)


def check_matrices(mats, rtol: float | None = HERMITIAN_RTOL) -> list[np.ndarray]:
    """Validate a non-empty sequence of equally sized square matrices.

    When ``rtol`` is not None every matrix must satisfy
    ``|T - T*| <= rtol * |T|`` in the spectral norm.
    """
    mats = [check_square_matrix(A, f"T{i + 1}") for i, A in enumerate(mats)]
    if not mats:
        raise ValueError("need at least one operator")
    d = mats[0].shape[0]
    for i, A in enumerate(mats):
        if A.shape[0] != d:
            raise ValueError(f"T{i + 1} has dimension {A.shape[0]}, expected {d}")
    if rtol is not None:
        bad = []
        for i, A in enumerate(mats):
            r = hermitian_residual(A)
            if r > rtol * max(np.linalg.norm(A, 2), 1.0):
                bad.append((i, r))
        if bad:
            raise HermiticityError(bad)
    return mats


def check_multi_index(alpha, n: int | None = None) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index {alpha} has negative entries")
    if n is not None and len(alpha) != n:
        raise ValueError(f"multi-index {alpha} does not have {n} entries")
    return alpha


def check_point(x, n: int | None = None) -> np.ndarray:
    """Point of R^{n+1} as a float vector ``(x0, ..., xn)``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("a point needs coordinates (x0, x1, ..., xn) with n >= 1")
    if n is not None and x.size != n + 1:
        raise ValueError(f"point has {x.size} coordinates, expected {n + 1}")
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite coordinates")
    return x


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not value > 0:
        raise ValueError(f"{name} must be a positive real number, got {value!r}")
    return float(value)
