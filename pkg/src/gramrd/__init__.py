"""Rate-distortion bounds for Gram matrices of random latent vectors.

The package has three layers:

* exact evaluation — closed-form lower bounds on the rate needed to
  reproduce a Gram matrix X = Z Z^T within a given distortion, with every
  intermediate term itemized (:mod:`gramrd.bounds`, :mod:`gramrd.specfun`,
  :mod:`gramrd.linalg`);
* numerical oracles — Blahut-Arimoto, a constructive quantization code
  and Monte Carlo entropy estimation that cross-check the closed forms
  from independent directions (:mod:`gramrd.oracles`);
* experiments — random-geometric-graph recovery sweeps around the
  d = n h(p) threshold with a baseline spectral estimator
  (:mod:`gramrd.rgg`), driven by the ``gramrd`` command line
  (:mod:`gramrd.cli`).

Everything randomized is seeded and reproducible bit-for-bit.
"""

from .bounds import (
    BoundConstants,
    BoundReport,
    Regime,
    alignment_rd_lower_bound,
    applicable_lower_bounds,
    entropy_count_completion,
    entropy_count_graph,
    gaussian_matrix_rd,
    gaussian_vector_slb,
    impossibility_threshold,
    large_dim_lower_bound,
    middle_dim_lower_bound,
    shannon_lower_bound_expanded,
    shannon_lower_bound_gram,
    small_dim_lower_bound,
    spherical_lower_bound,
    wishart_differential_entropy,
)
from .errors import (
    DegenerateInputError,
    DomainError,
    GramRDError,
    RegimeError,
    ValidationError,
)
from .linalg import (
    GramMatrix,
    LatentMatrix,
    gram_from_latents,
    gram_loss_L,
    nuclear_norm,
    polar_decompose,
    procrustes_loss_ell,
    psd_sqrt,
)
from .oracles import (
    DiscreteRDProblem,
    RDCurvePoint,
    binary_hamming_problem,
    blahut_arimoto,
    discretized_gaussian_problem,
    mc_differential_entropy_wishart,
    quantization_upper_bound,
    solve_rd_at_distortion,
)
from .rgg import (
    ExperimentRecord,
    GraphSample,
    calibrate_threshold,
    generate_graph,
    graph_from_latents,
    phase_sweep,
    spectral_estimate,
    trivial_estimate,
)
from .sampling import (
    BetaDecomposition,
    LatentConfig,
    Prior,
    beta_decompose,
    sample_gram,
    sample_latents,
    stream,
)
from .specfun import (
    binary_entropy,
    digamma,
    log_gamma,
    multivariate_digamma,
    multivariate_log_gamma,
    nats_to_bits,
)
from .verify import SuiteReport, available_suites, verify_inequality_suite

__version__ = "0.1.0"

__all__ = [
    "BetaDecomposition",
    "BoundConstants",
    "BoundReport",
    "DegenerateInputError",
    "DiscreteRDProblem",
    "DomainError",
    "ExperimentRecord",
    "GramMatrix",
    "GramRDError",
    "GraphSample",
    "LatentConfig",
    "LatentMatrix",
    "Prior",
    "RDCurvePoint",
    "Regime",
    "RegimeError",
    "SuiteReport",
    "ValidationError",
    "__version__",
    "alignment_rd_lower_bound",
    "applicable_lower_bounds",
    "available_suites",
    "beta_decompose",
    "binary_entropy",
    "binary_hamming_problem",
    "blahut_arimoto",
    "calibrate_threshold",
    "digamma",
    "discretized_gaussian_problem",
    "entropy_count_completion",
    "entropy_count_graph",
    "gaussian_matrix_rd",
    "gaussian_vector_slb",
    "generate_graph",
    "gram_from_latents",
    "gram_loss_L",
    "graph_from_latents",
    "impossibility_threshold",
    "large_dim_lower_bound",
    "log_gamma",
    "mc_differential_entropy_wishart",
    "middle_dim_lower_bound",
    "multivariate_digamma",
    "multivariate_log_gamma",
    "nats_to_bits",
    "nuclear_norm",
    "phase_sweep",
    "polar_decompose",
    "procrustes_loss_ell",
    "psd_sqrt",
    "quantization_upper_bound",
    "sample_gram",
    "sample_latents",
    "shannon_lower_bound_expanded",
    "shannon_lower_bound_gram",
    "small_dim_lower_bound",
    "solve_rd_at_distortion",
    "spectral_estimate",
    "spherical_lower_bound",
    "stream",
    "trivial_estimate",
    "verify_inequality_suite",
    "wishart_differential_entropy",
]
