"""Fractional-order gradient methods with convergence-region analysis.

A small convex-optimization toolkit built around the two-point update
``t[k+1] = t[k] - rho * f'(t[k]) * (|t[k] - t[k-1]| + delta)^(1-alpha)``:
the optimizers themselves, the region bounds and regularizer prescription
that govern them, empirical order estimators, and a benchmark runner with
a CLI (see ``fogm --help``).
"""

from .analysis import (
    Classification,
    ConvergenceReport,
    CrossingSummary,
    OrderFit,
    SampleRegion,
    classify,
    crossings,
    estimate_convexity_order,
    estimate_lipschitz_order,
    recommend_delta,
    theoretical_bound,
)
from .bench import (
    ConfigEntry,
    ExperimentSpec,
    SummaryRow,
    get_experiment,
    read_trace_csv,
    registry,
    run_experiment,
    run_single,
    write_report_json,
    write_trace_csv,
)
from .errors import (
    BracketingFailed,
    DegenerateSample,
    DomainError,
    FogmError,
    MissingMetadata,
    NonEmptyRequired,
    NonFiniteValue,
    SingularStep,
)
from .fracderiv import (
    FracSeriesSpec,
    SeriesKind,
    caputo_series,
    fogm_direction_term,
    gamma,
    rl_series,
)
from .objective import (
    Polynomial,
    ScalarObjective,
    VectorObjective,
    check_gradient,
    parse_objective,
    power_four_thirds,
    quadratic,
)
from .optimizers import (
    DIVERGENCE_GUARD,
    IterationRecord,
    Method,
    OptimizerConfig,
    Phase,
    Termination,
    Trace,
    fogm_step,
    gm_step,
    run,
    run_vector,
    switching_policy,
)

__version__ = "0.1.0"

__all__ = [
    "BracketingFailed",
    "Classification",
    "ConfigEntry",
    "ConvergenceReport",
    "CrossingSummary",
    "DIVERGENCE_GUARD",
    "DegenerateSample",
    "DomainError",
    "ExperimentSpec",
    "FogmError",
    "FracSeriesSpec",
    "IterationRecord",
    "Method",
    "MissingMetadata",
    "NonEmptyRequired",
    "NonFiniteValue",
    "OptimizerConfig",
    "OrderFit",
    "Phase",
    "Polynomial",
    "SampleRegion",
    "ScalarObjective",
    "SeriesKind",
    "SingularStep",
    "SummaryRow",
    "Termination",
    "Trace",
    "VectorObjective",
    "caputo_series",
    "check_gradient",
    "classify",
    "crossings",
    "estimate_convexity_order",
    "estimate_lipschitz_order",
    "fogm_direction_term",
    "fogm_step",
    "gamma",
    "get_experiment",
    "gm_step",
    "parse_objective",
    "power_four_thirds",
    "quadratic",
    "read_trace_csv",
    "recommend_delta",
    "registry",
    "rl_series",
    "run",
    "run_experiment",
    "run_single",
    "run_vector",
    "switching_policy",
    "theoretical_bound",
    "write_report_json",
    "write_trace_csv",
]
