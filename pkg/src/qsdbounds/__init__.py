"""Finite-sample error bounds for binary quantum state discrimination.

The package computes explicit, every-n bounds on the error probabilities of
discriminating n copies of two quantum states, in three regimes:

* fixed type-I budget (Stein): bounds on the type-II error rate,
* exponential type-I budget (Hoeffding): bounds on the type-II error rate,
* symmetric mixed error (Chernoff): bounds on the Bayesian error rate,

together with exact small-n oracles against which every bound can be checked.
"""
from .classical_binary import (
    BinaryPair,
    EnBounds,
    RateCurveRow,
    crossover_s,
    en_bounds,
    en_exact,
    en_exact_log,
    inc_beta_reg,
    incbeta_monotonicity_check,
    rate_curve,
    rate_curve_csv,
)
from .divergences import (
    DivergenceProfile,
    PsiCurve,
    a_r,
    binary_entropy,
    build_psi,
    chernoff_distance,
    divergence_profile,
    entropy_difference_bound,
    eta,
    hoeffding_distance,
    phi,
    phi_hat,
    profile_from_curve,
    psi,
    psi_curve_from_probabilities,
    psi_prime,
    psi_second,
    relative_entropy,
    relative_entropy_variance,
    renyi,
    solve_t_r,
    von_neumann_entropy,
)
from .errors import (
    ConvergenceError,
    DegeneracyError,
    QsdError,
    ResourceLimitError,
    ValidationError,
)
from .exact_oracles import (
    NPTestErrors,
    beta_eps_exact,
    classical_beta_eps_exact,
    np_test_errors,
    quantum_mixed_error_exact,
)
from .finite_bounds import (
    BoundReport,
    ClassicalLowerBounds,
    MixedUpperBounds,
    classical_lower,
    hoeffding_upper,
    mixed_upper,
    quantum_chernoff_lower,
    quantum_mixed_lower,
    second_order_reference,
    stein_lower,
    stein_upper,
    stein_upper_generic,
    stein_upper_intermediate,
)
from .linalg import (
    DensityMatrix,
    HermitianMatrix,
    SpectralDecomposition,
    kron,
    matrix_power_support,
    positive_part_trace,
    tensor_power,
    trace_norm,
)
from .ns_mapping import (
    ClassicalErrors,
    ClassicalPair,
    TypeVector,
    build_classical_pair,
    classical_exact_errors,
    classical_exact_errors_log,
    halfspace_type_approximation,
    iter_types,
    sequence_type,
    type_class_log_probability,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryPair",
    "BoundReport",
    "ClassicalErrors",
    "ClassicalLowerBounds",
    "ClassicalPair",
    "ConvergenceError",
    "DegeneracyError",
    "DensityMatrix",
    "DivergenceProfile",
    "EnBounds",
    "HermitianMatrix",
    "MixedUpperBounds",
    "NPTestErrors",
    "PsiCurve",
    "QsdError",
    "RateCurveRow",
    "ResourceLimitError",
    "SpectralDecomposition",
    "TypeVector",
    "ValidationError",
    "a_r",
    "beta_eps_exact",
    "binary_entropy",
    "build_classical_pair",
    "build_psi",
    "chernoff_distance",
    "classical_beta_eps_exact",
    "classical_exact_errors",
    "classical_exact_errors_log",
    "classical_lower",
    "crossover_s",
    "divergence_profile",
    "en_bounds",
    "en_exact",
    "en_exact_log",
    "entropy_difference_bound",
    "eta",
    "halfspace_type_approximation",
    "hoeffding_distance",
    "hoeffding_upper",
    "inc_beta_reg",
    "incbeta_monotonicity_check",
    "iter_types",
    "kron",
    "matrix_power_support",
    "mixed_upper",
    "np_test_errors",
    "phi",
    "phi_hat",
    "positive_part_trace",
    "profile_from_curve",
    "psi",
    "psi_curve_from_probabilities",
    "psi_prime",
    "psi_second",
    "quantum_chernoff_lower",
    "quantum_mixed_error_exact",
    "quantum_mixed_lower",
    "rate_curve",
    "rate_curve_csv",
    "relative_entropy",
    "relative_entropy_variance",
    "renyi",
    "second_order_reference",
    "sequence_type",
    "solve_t_r",
    "stein_lower",
    "stein_upper",
    "stein_upper_generic",
    "stein_upper_intermediate",
    "tensor_power",
    "trace_norm",
    "type_class_log_probability",
    "von_neumann_entropy",
]
