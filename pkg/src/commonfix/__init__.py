"""Common fixed points and common endpoints of pairs of multi-valued maps.

Finite metric spaces only: every closed bounded set is represented by a
nonempty finite point set, so Hausdorff distances, certificates and
brute-force oracles are all exact.
"""

from .contraction import (
    AlphaOracle,
    CertificateError,
    CertificateReport,
    CompactlyPositiveGap,
    ContractionSpec,
    Gauge,
    alpha_from_compact_gap,
    alpha_from_gauge,
    check_alpha_duality,
    check_gauge_conditions,
    check_phi_duality,
    check_weakly_contractive,
    lambda_band,
    m_functional,
    n_functional,
)
from .endpoint import (
    EndpointResult,
    approximate_endpoint_scan,
    combined_gap,
    endpoint_gap,
    find_common_endpoint,
)
from .maps import MultiMap
from .metric import (
    DomainError,
    MetricSpace,
    PointSet,
    distance,
    hausdorff,
    point_set_distance,
    validate_metric,
)
from .problem import ProblemError, ProblemFile, load_problem, parse_problem, render_problem
from .solver import (
    IterationTrace,
    SolverConfig,
    cauchy_bound,
    check_recurrence,
    epsilon_schedule,
    iterate_duality,
    select_next,
    verify_limit_fixed,
)

__version__ = "0.1.0"
