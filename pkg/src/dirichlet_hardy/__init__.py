"""Hardy-space norms of Dirichlet polynomials and zeta pseudomoment experiments."""

__version__ = "0.1.0"

from .arith import (
    EulerProductValue,
    Factorization,
    PrimeTable,
    average_order_constant,
    average_order_factor,
    binomial_series_coefficient,
    divisor_function,
    divisor_weight,
    divisor_weight_prime_power,
    divisor_weight_sum,
    euler_product,
    factorize,
    omega_class_counts,
    pseudomoment_leading_factor,
    pseudomoment_ratio_bounds,
    sieve_primes,
)
from .bounds import (
    CoefficientBound,
    HLReport,
    coeff_functional_bound,
    coeff_functional_exact,
    coeff_functional_multiplicative,
    hl_lower_sum,
    hl_report,
    hl_upper_sum,
    point_evaluation_margin,
    primitive_pairing,
    squarefree_lower_sum,
)
from .dseries import (
    BohrMonomial,
    DirichletPolynomial,
    GeneratorSpec,
    bohr_lift,
    dirichlet_multiply,
    dirichlet_power,
    duality_witness,
    euler_factor_power,
    extremal_product,
    fractional_primitive,
    generate,
    homogeneous_projection,
    partial_sum,
    smooth_truncation,
    zeta_partial,
    zeta_power_partial,
)
from .errors import ResourceLimitError, SieveLimitError
from .experiments import (
    ExperimentRecord,
    FuzzConfig,
    FuzzResult,
    harmonic_number,
    hl_fuzz_suite,
    homogeneous_energy,
    maximal_order_scan,
    omega_concentration,
    partial_sum_ratio_probe,
    partial_sum_witness,
    pseudomoment,
    pseudomoment_scan,
    pseudomoment_window_check,
)
from .norms import (
    DiscPolynomial,
    NormEstimate,
    SteinhausSample,
    dilate,
    disc_norm,
    evaluate_at_sample,
    even_norm_exact,
    l2_norm,
    mc_norm,
    mc_norm_many,
    pairwise_sum,
    steinhaus_sample,
    steinhaus_uniforms,
)
