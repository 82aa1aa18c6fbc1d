"""Invariant suites behind ``riesz-clifford verify``.

Every suite returns a list of check records ``{name, residual, tolerance,
passed}``.  All randomness flows from a single seeded generator so that a
suite run is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .calculus import (
    OperatorKernelConfig,
    calculus_integral,
    calculus_taylor,
    commuting_oracle,
    relative_difference,
    spectral_radius_bound,
    vanishing_check,
)
from .clifford import Multivector, conjugate, generator_matrices
from .kernels import biorthogonality_residual
from .polyspace import (
    HyperPolynomial,
    OperatorTuple,
    ck_polynomial,
    dirac_apply,
    multi_indices,
    multi_indices_upto,
    symmetric_product,
    v_polynomial,
)
from .quant import (
    jordan_nonassociativity_witness,
    jordan_product,
    jordan_square_form,
    parse_polynomial,
    quantize,
    weyl_exponential_check,
)

SUITES = ("algebra", "hyperholo", "orthogonality", "calculus", "quantization")


@dataclass(frozen=True)
class Tolerances:
    """Default tolerances for every named check; override per field."""

    associativity: float = 1e-12
    anti_automorphism: float = 1e-12
    vector_norm: float = 1e-13
    representation: float = 1e-12
    ck_agreement: float = 1e-12
    orthogonality: float = 1e-6
    route_agreement: float = 1e-6
    radius_independence: float = 1e-6
    identity: float = 1e-7
    generator: float = 1e-7
    commuting: float = 1e-10
    symmetrization: float = 1e-12
    weyl_exponential: float = 1e-4
    jordan: float = 1e-13
    hermitian: float = 1e-12
    witness_min: float = 0.1

    def override(self, pairs: dict[str, float]) -> "Tolerances":
        names = {f.name for f in fields(self)}
        unknown = set(pairs) - names
        if unknown:
            raise ValueError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
        return replace(self, **pairs)

    def as_dict(self) -> dict:
        return asdict(self)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (A + A.conj().T) / 2


def random_multivector(n: int, rng: np.random.Generator) -> Multivector:
    return Multivector.from_dense(rng.standard_normal(1 << n), n)


def random_commuting_tuple(m: int, d: int, rng: np.random.Generator) -> OperatorTuple:
    """Polynomials in one Hermitian matrix: ``T_j = sum_k a_jk S^k``."""
    S = random_hermitian(d, rng) / np.sqrt(d)
    mats = []
    for _ in range(m):
        a = rng.standard_normal(3)
        M = a[0] * np.eye(d) + a[1] * S + a[2] * S @ S
        mats.append((M + M.conj().T) / 2)
    return OperatorTuple(mats)


def _check(name: str, residual: float, tol: float, mode: str = "le") -> dict:
    residual = float(residual)
    passed = residual <= tol if mode == "le" else residual > tol
    return {"name": name, "residual": residual, "tolerance": tol, "comparison": mode, "passed": bool(passed)}


def _rel(a: Multivector, b: Multivector) -> float:
    return (a - b).norm_inf() / max(1.0, a.norm_inf(), b.norm_inf())


def suite_algebra(rng, tol: Tolerances, samples: int = 200, **_) -> list[dict]:
    n = 3
    assoc = anti = 0.0
    for _ in range(samples):
        x, y, z = (random_multivector(n, rng) for _ in range(3))
        assoc = max(assoc, _rel((x * y) * z, x * (y * z)))
        anti = max(anti, _rel(conjugate(x * y), conjugate(y) * conjugate(x)))
    vec = 0.0
    for _ in range(samples):
        v = rng.standard_normal(n + 1)
        V = Multivector.vector(v)
        vec = max(vec, (V * conjugate(V) - Multivector.scalar(n, float(v @ v))).norm_inf() / max(1.0, v @ v))
    rep = generator_matrices(n)
    hom = 0.0
    for _ in range(samples // 10 + 1):
        x, y = random_multivector(n, rng), random_multivector(n, rng)
        hom = max(hom, float(np.abs(rep.represent(x * y) - rep.represent(x) @ rep.represent(y)).max()))
    return [
        _check("associativity", assoc, tol.associativity),
        _check("anti_automorphism", anti, tol.anti_automorphism),
        _check("vector_norm", vec, tol.vector_norm),
        _check("representation_homomorphism", hom, tol.representation),
    ]


def suite_hyperholo(rng, tol: Tolerances, max_degree: int = 4, **_) -> list[dict]:
    out = []
    for n in (2, 3):
        alphas = multi_indices_upto(n, max_degree)
        nonzero = sum(not dirac_apply(v_polynomial(a)).is_zero() for a in alphas)
        out.append(_check(f"dirac_V_n{n}", nonzero, 0))
        worst = 0.0
        pts = rng.standard_normal((16, n + 1))
        for a in alphas:
            worst = max(worst, float(np.abs(v_polynomial(a).evaluate_dense(pts)
                                            - ck_polynomial(a).evaluate_dense(pts)).max()))
        out.append(_check(f"ck_agreement_n{n}", worst, tol.ck_agreement))
        deficit = 0
        for k in range(max_degree + 1):
            deficit += basis_dimension(n, k)[1] - basis_dimension(n, k)[0]
        out.append(_check(f"basis_rank_deficit_n{n}", deficit, 0))
    return out


def basis_dimension(n: int, k: int) -> tuple[int, int]:
    """``(rank of {V_alpha : |alpha| = k}, C(k+n-1, n-1))``."""
    alphas = multi_indices(n, k)
    polys = [v_polynomial(a) for a in alphas]
    keys = sorted({key for p in polys for key in p.terms})
    M = np.array([p.coefficient_vector(keys) for p in polys])
    return int(np.linalg.matrix_rank(M)), math.comb(k + n - 1, n - 1)


def suite_orthogonality(rng, tol: Tolerances, max_degree: int = 3, order: int = 48, **_) -> list[dict]:
    res = biorthogonality_residual(2, max_degree, order)
    return [_check(f"biorthogonality_deg{max_degree}", res, tol.orthogonality)]


def suite_calculus(rng, tol: Tolerances, instances: int = 4, **_) -> list[dict]:
    route = vanish = ident = gen = comm = 0.0
    for i in range(instances):
        m = 2 if i % 2 == 0 else 3
        T = OperatorTuple([random_hermitian(4, rng) for _ in range(m)])
        f = HyperPolynomial.random(m, 3, rng)
        bound = spectral_radius_bound(T)
        taylor = calculus_taylor(f, T)
        integral = calculus_integral(f, T, OperatorKernelConfig(radius=2 * bound))
        route = max(route, relative_difference(integral.value, taylor.value, T.d))
        vanish = max(vanish, vanishing_check(f, T, 1.5 * bound, 3 * bound))
        one = calculus_integral(HyperPolynomial.constant(m), T).value
        ident = max(ident, float(np.abs(one.to_dense(shape=(4, 4), dtype=complex)[0] - np.eye(4)).max()))
        x1 = calculus_integral(HyperPolynomial.regular_variable(m, 1), T).value
        gen = max(gen, float(np.abs(x1.to_dense(shape=(4, 4), dtype=complex)[0] - T[0]).max()))
        C = random_commuting_tuple(m, 4, rng)
        comm = max(comm, relative_difference(calculus_taylor(f, C).value, commuting_oracle(f, C).value, 4))
    return [
        _check("route_agreement", route, tol.route_agreement),
        _check("radius_independence", vanish, tol.radius_independence),
        _check("identity", ident, tol.identity),
        _check("generator", gen, tol.generator),
        _check("commuting_oracle", comm, tol.commuting),
    ]


def suite_quantization(rng, tol: Tolerances, **_) -> list[dict]:
    sym = 0.0
    for k in range(1, 7):
        mats = [random_hermitian(3, rng) for _ in range(k)]
        sym = max(sym, float(np.abs(symmetric_product(mats) - symmetric_product(mats, method="naive")).max()))
    A, B, C = (random_hermitian(3, rng) for _ in range(3))
    weyl = max(weyl_exponential_check(a, [A, B]) for a in multi_indices_upto(2, 3) if sum(a) > 0)
    jordan = float(np.abs(jordan_product(A, B) - quantize(parse_polynomial("x1 x2"), [A, B])).max())
    square = float(np.abs(jordan_product(A, B) - jordan_square_form(A, B)).max())
    p = parse_polynomial("2.5 x1^2 x3 - x2 + 0.5 x1 x2 x3")
    Q = quantize(p, [A, B, C])
    herm = float(np.abs(Q - Q.conj().T).max())
    D = random_commuting_tuple(2, 3, rng)
    mult = float(np.abs(quantize(parse_polynomial("x1^2 x2"), D) - D[0] @ D[0] @ D[1]).max())
    return [
        _check("symmetrization_oracle", sym, tol.symmetrization),
        _check("weyl_exponential", weyl, tol.weyl_exponential),
        _check("jordan_quantize", jordan, tol.jordan),
        _check("jordan_square_form", square, tol.jordan),
        _check("hermiticity", herm, tol.hermitian),
        _check("commuting_multiplicative", mult, tol.hermitian),
        _check("nonassociativity_witness", jordan_nonassociativity_witness(), tol.witness_min, mode="gt"),
    ]


_SUITE_FUNCS = {
    "algebra": suite_algebra,
    "hyperholo": suite_hyperholo,
    "orthogonality": suite_orthogonality,
    "calculus": suite_calculus,
    "quantization": suite_quantization,
}


def run_suite(name: str, seed: int, tol: Tolerances | None = None, **options) -> dict:
    """Run one suite or ``"all"``; returns ``{suite: [checks...]}``."""
    tol = tol or Tolerances()
    names = SUITES if name == "all" else (name,)
    for s in names:
        if s not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES + ('all',))}")
    out = {}
    for s in names:
        # each suite draws from its own stream so results do not depend on the selection
        rng = np.random.default_rng([seed, SUITES.index(s)])
        opts = {k: v for k, v in options.items() if v is not None}
        out[s] = _SUITE_FUNCS[s](rng, tol, **opts)
    return out


def all_passed(results: dict) -> bool:
    return all(c["passed"] for checks in results.values() for c in checks)
