"""BGK relaxation solver for stochastic scalar balance laws."""

from ._sbgk import (
    ConfigError,
    SbgkError,
    DensityField,
    EnsembleStats,
    Profile,
    SolverConfig,
    SpaceGrid,
    Trajectory,
    VelocityGrid,
    ensemble,
    entropy_tolerance,
    godunov_reference,
    run,
    run_suite,
    sample_shift,
    solve_pathwise_shift,
    suite_names,
    __version__,
)

__all__ = [
    "ConfigError",
    "SbgkError",
    "DensityField",
    "EnsembleStats",
    "Profile",
    "SolverConfig",
    "SpaceGrid",
    "Trajectory",
    "VelocityGrid",
    "ensemble",
    "entropy_tolerance",
    "godunov_reference",
    "run",
    "run_suite",
    "sample_shift",
    "solve_pathwise_shift",
    "suite_names",
    "__version__",
]
