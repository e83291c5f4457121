"""Random-graph models whose degree distributions come from Dirichlet series.

The package evaluates the series and their Hurwitz/Barnes relatives with
rigorous tail bounds, derives degree distributions and closed-form
giant-component / epidemic thresholds from them, traces phase diagrams
over the exponent plane, and validates everything by configuration-model
sampling and SIR percolation.
"""

__version__ = "0.1.0"

from .arith import (
    ArithmeticFunction,
    dirichlet_convolve,
    dirichlet_inverse_cm,
    epsilon_function,
    euler_phi,
    euler_phi_function,
    factorize,
    identity_function,
    liouville,
    liouville_function,
    mobius,
    mobius_function,
    pointwise_product,
    unit_function,
    verify_multiplicative,
)
from .degdist import (
    DegreeDistribution,
    JointDegreeDistribution,
    gf_g0,
    gf_g1,
    kmax_rule,
    make_bipartite_lgraph,
    make_degree_distribution,
    make_directed_barnes,
    make_directed_separated,
    mean_degree,
)
from .epidemics import (
    OutbreakSize,
    Transmissibility,
    critical_product_curve,
    dressed_gf,
    epidemic_threshold_product,
    mean_outbreak_size,
)
from .errors import (
    BalanceFailureError,
    ClusteringRangeWarning,
    ConvergenceDomainError,
    DegenerateDenominatorError,
    EmptyWindowError,
    FormalDistributionWarning,
    NoSignChangeError,
    SignedDistributionError,
    UnboundedCoefficientError,
    ZeroNormalizerError,
    ZetanetError,
)
from .lseries import (
    DEFAULT_TOL,
    EvalResult,
    LSeries,
    barnes_zeta,
    hurwitz_zeta,
    lseries_eval,
    make_family,
    riemann_zeta,
)
from .phasescan import (
    PRESETS,
    PhaseScanResult,
    default_window,
    export_scan,
    load_scan,
    resolve_formula,
    scan,
)
from .sampler import (
    GraphSample,
    OutbreakStats,
    UnionFind,
    build_bipartite,
    build_directed,
    giant_component_fraction,
    measured_clustering,
    one_mode_projection,
    read_edgelist,
    sample_degree_sequence,
    sir_percolation,
    write_edgelist,
)
from .thresholds import (
    ThresholdResult,
    bipartite_margin,
    bipartite_margin_oracle,
    clustering_coefficient,
    clustering_f_factor,
    directed_joint_margin,
    directed_separated_margin,
    find_critical_exponent,
    unipartite_margin,
)

__all__ = [name for name in dir() if not name.startswith("_")]
