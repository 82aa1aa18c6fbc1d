"""Hyperholomorphic functional calculus for tuples of Hermitian matrices."""

__version__ = "0.1.0"

from .calculus import (
    CalculusResult,
    ConvergenceWarning,
    OperatorKernelConfig,
    SpectralBoundError,
    calculus_integral,
    calculus_taylor,
    calculus_taylor_series,
    commuting_oracle,
    operator_cauchy_kernel,
    resolvent_probe,
    spectral_radius_bound,
    vanishing_check,
)
from .clifford import GeneratorRep, Multivector, blade_mul, conjugate, generator_matrices, mv_mul
from .estimators import HyperholomorphicCalculus, WeylQuantizer
from .kernels import (
    QuadratureRule,
    cauchy_kernel,
    kernel_decomposition_check,
    sphere_rule,
    w_poly,
)
from .polyspace import (
    HyperPolynomial,
    OperatorTuple,
    dirac_apply,
    multi_indices,
    symmetric_product,
    v_poly_ck,
    v_poly_operators,
    v_poly_point,
)
from .quant import (
    ClassicalPolynomial,
    FillingState,
    fermi_distribution,
    jordan_product,
    parse_polynomial,
    quantize,
    weyl_exponential_check,
)
from .validation import HermiticityError

__all__ = [
    "CalculusResult",
    "ClassicalPolynomial",
    "ConvergenceWarning",
    "FillingState",
    "GeneratorRep",
    "HermiticityError",
    "HyperPolynomial",
    "HyperholomorphicCalculus",
    "Multivector",
    "OperatorKernelConfig",
    "OperatorTuple",
    "QuadratureRule",
    "SpectralBoundError",
    "WeylQuantizer",
    "blade_mul",
    "calculus_integral",
    "calculus_taylor",
    "calculus_taylor_series",
    "cauchy_kernel",
    "commuting_oracle",
    "conjugate",
    "dirac_apply",
    "fermi_distribution",
    "generator_matrices",
    "jordan_product",
    "kernel_decomposition_check",
    "multi_indices",
    "mv_mul",
    "operator_cauchy_kernel",
    "parse_polynomial",
    "quantize",
    "resolvent_probe",
    "spectral_radius_bound",
    "sphere_rule",
    "symmetric_product",
    "v_poly_ck",
    "v_poly_operators",
    "v_poly_point",
    "vanishing_check",
    "w_poly",
    "weyl_exponential_check",
]
