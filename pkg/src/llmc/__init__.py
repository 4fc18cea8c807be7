"""Sampling from heavy-tailed laws on (0, inf) by jump-driven Langevin paths.

The process decays deterministically along a drift built from the target
density and jumps upward at Poisson times; its invariant law is exactly
the target.  The package provides the piecewise target densities, the
jump-size families with their tail-condition checkers, the drift
construction, the path simulator, and sample diagnostics.
"""

from .targets import (
    TargetDensity,
    Segment,
    make_expr,
    builtin_target,
    BUILTIN_TARGETS,
    TargetValidationError,
)
from .jumps import (
    JumpDistribution,
    Exponential,
    Weibull,
    Lognormal,
    Lomax,
    JUMP_FAMILIES,
    make_jump,
    GridSpec,
    ConditionReport,
    check_conditions,
    PASS,
    FAIL,
    INCONCLUSIVE,
)
from .drift import (
    DriftField,
    convolve_tail,
    phi,
    build_cache,
    phi_truncated,
    DriftBuildError,
    DriftRangeError,
)
from .sampler import (
    SimulationConfig,
    Path,
    SampleSet,
    flow,
    simulate_path,
    simulate_ensemble,
    simulate_coupled_truncation,
)
from .diagnostics import (
    DiagnosticsReport,
    ks_distance,
    tail_coverage,
    hill_estimator,
    Bump,
    default_bumps,
    generator_residual,
    histogram,
    Histogram,
    poisson_count_test,
    run_diagnostics,
)
from .config import RunConfig, ConfigError, default_config, \
    config_from_dict, load_config

__version__ = "0.1.0"

__all__ = [
    "TargetDensity", "Segment", "make_expr", "builtin_target",
    "BUILTIN_TARGETS", "TargetValidationError",
    "JumpDistribution", "Exponential", "Weibull", "Lognormal", "Lomax",
    "JUMP_FAMILIES", "make_jump", "GridSpec", "ConditionReport",
    "check_conditions", "PASS", "FAIL", "INCONCLUSIVE",
    "DriftField", "convolve_tail", "phi", "build_cache", "phi_truncated",
    "DriftBuildError", "DriftRangeError",
    "SimulationConfig", "Path", "SampleSet", "flow", "simulate_path",
    "simulate_ensemble", "simulate_coupled_truncation",
    "DiagnosticsReport", "ks_distance", "tail_coverage", "hill_estimator",
    "Bump", "default_bumps", "generator_residual", "histogram", "Histogram",
    "poisson_count_test", "run_diagnostics",
    "RunConfig", "ConfigError", "default_config", "config_from_dict",
    "load_config",
    "__version__",
]
