"""Exact accessibility analysis for rational discrete-time control systems.

Decides forward accessibility symbolically (stabilization index, singular
point set, accessibility index) and cross-checks every verdict with a
numeric brute-force oracle.
"""

__version__ = "0.1.0"

from .analysis import (
    AnalysisReport,
    PointVerdict,
    SingularSet,
    algorithm1,
    algorithm2,
    backward_analysis,
    cumulative_ideal,
    default_max_k,
    generic_accessibility,
    invariance_check,
    point_status,
)
from .errors import (
    AccessKitError,
    DegenerateDenominatorError,
    PoleError,
    ResourceBudgetError,
)
from .groebner import (
    Ideal,
    MonomialOrder,
    groebner_basis,
    ideal_equal,
    ideal_sum,
    radical_heuristic,
    solve_zero_dim,
)
from .oracle import (
    RankEstimate,
    Trajectory,
    grid_scan_1d,
    jacobian_rank,
    numeric_access_matrix,
    simulate,
)
from .ring import (
    Polynomial,
    RationalFunction,
    VariableRegistry,
    collect_by_class,
    poly_gcd,
    square_free_part,
)
from .sysfile import (
    ParseError,
    SystemSpecFile,
    parse_system,
    pretty,
    to_numeric_step,
    to_system_model,
)
from .system import (
    AccessMatrix,
    SystemModel,
    build_M,
    coefficient_ideal,
    jacobians,
    minors_and_coefficients,
    shift,
    submersivity_check,
    symbolic_rank,
)

__all__ = [
    "__version__",
    "AccessKitError",
    "AccessMatrix",
    "AnalysisReport",
    "DegenerateDenominatorError",
    "Ideal",
    "MonomialOrder",
    "ParseError",
    "PointVerdict",
    "PoleError",
    "Polynomial",
    "RankEstimate",
    "RationalFunction",
    "ResourceBudgetError",
    "SingularSet",
    "SystemModel",
    "SystemSpecFile",
    "Trajectory",
    "VariableRegistry",
    "algorithm1",
    "algorithm2",
    "backward_analysis",
    "build_M",
    "coefficient_ideal",
    "collect_by_class",
    "cumulative_ideal",
    "default_max_k",
    "generic_accessibility",
    "grid_scan_1d",
    "groebner_basis",
    "ideal_equal",
    "ideal_sum",
    "invariance_check",
    "jacobian_rank",
    "jacobians",
    "minors_and_coefficients",
    "numeric_access_matrix",
    "parse_system",
    "point_status",
    "poly_gcd",
    "pretty",
    "radical_heuristic",
    "shift",
    "simulate",
    "solve_zero_dim",
    "square_free_part",
    "submersivity_check",
    "symbolic_rank",
    "to_numeric_step",
    "to_system_model",
]
