"""Student-t family numerics and certification engine.

A library plus CLI for the Student-t family with real degrees of freedom
p in (0, inf]: density/tail machinery, generalized Stieltjes moments, the
recentred chi family, and grid certifiers for the monotone tail-ratio,
stochastic-dominance, moment-monotonicity, and total-positivity properties,
all backed by independent quadrature oracles.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DomainError,
    MeasureConsistencyError,
    OrderingError,
    QuadratureError,
    StudentFamilyError,
    UnsupportedFamilyError,
)
from .quadrature import QuadratureConfig
from .special import (
    digamma,
    digamma_gauss_oracle,
    ln_gamma,
    normal_tail,
    reg_inc_beta,
)
from .student import (
    INFINITE_DOF,
    TailEvaluation,
    density,
    dlogdensity_dp,
    dtail_dp,
    lemma1_lhs,
    lemma1_rhs,
    log_density,
    rho_prime,
    tail,
    tail_logderiv_r,
    tail_quadrature_oracle,
)
from .monotonicity import (
    GridSpec,
    MonotonicityReport,
    certify_mtr,
    certify_partial_mlr,
    certify_sm,
    check_monotone,
    stp2_minor,
    tail_ratio,
)
from .moments import (
    MeasureFamily,
    StieltjesMeasure,
    atoms_measure,
    certify_moment_monotone,
    certify_ratio_monotone,
    direct_moment_oracle,
    finiteness_threshold,
    generalized_moment,
    indicator_measure,
    parse_measure,
    power_log_measure,
    power_measure,
    power_moment,
)
from .truncated import PlusPartSpec, certify_prop1, conditional_above, conditional_below, plus_ratio
from .chi import certify_prop2, chi_density, z_moment, z_ratio

__all__ = [
    "__version__",
    "INFINITE_DOF",
    "QuadratureConfig",
    "TailEvaluation",
    "GridSpec",
    "MonotonicityReport",
    "StieltjesMeasure",
    "MeasureFamily",
    "PlusPartSpec",
    "StudentFamilyError",
    "DomainError",
    "OrderingError",
    "QuadratureError",
    "ConvergenceError",
    "MeasureConsistencyError",
    "UnsupportedFamilyError",
    "ln_gamma",
    "digamma",
    "digamma_gauss_oracle",
    "reg_inc_beta",
    "normal_tail",
    "density",
    "log_density",
    "tail",
    "tail_quadrature_oracle",
    "dlogdensity_dp",
    "rho_prime",
    "dtail_dp",
    "tail_logderiv_r",
    "lemma1_lhs",
    "lemma1_rhs",
    "check_monotone",
    "tail_ratio",
    "certify_mtr",
    "certify_sm",
    "stp2_minor",
    "certify_partial_mlr",
    "generalized_moment",
    "direct_moment_oracle",
    "power_moment",
    "power_measure",
    "power_log_measure",
    "indicator_measure",
    "atoms_measure",
    "parse_measure",
    "finiteness_threshold",
    "certify_moment_monotone",
    "certify_ratio_monotone",
    "conditional_below",
    "conditional_above",
    "plus_ratio",
    "certify_prop1",
    "chi_density",
    "z_moment",
    "z_ratio",
    "certify_prop2",
]
