"""Certified reduced-basis error bounds and Sobol sensitivity analysis."""

from ._core import (
    AffineModel,
    ConfigError,
    ContractError,
    DomainError,
    NumericError,
    RankError,
    GoalOrientedBoundData,
    ParameterBox,
    Partition,
    ReducedBasis,
    ReducedModel,
    SobolResult,
    bound,
    build_diffusion,
    build_transport,
    corrected_output,
    dual_based_bound,
    lipschitz_bound,
    load_bound_data,
    pod_basis,
    project,
    reduced_output,
    residual,
    sobol_certified,
    sobol_meta_interval,
    sobol_point_estimate,
    solve_reduced,
    stability_constant,
    t1,
    train_goal_oriented,
    transport_time_march,
)

__all__ = [
    "AffineModel",
    "ConfigError",
    "ContractError",
    "DomainError",
    "NumericError",
    "RankError",
    "GoalOrientedBoundData",
    "ParameterBox",
    "Partition",
    "ReducedBasis",
    "ReducedModel",
    "SobolResult",
    "bound",
    "build_diffusion",
    "build_transport",
    "corrected_output",
    "dual_based_bound",
    "lipschitz_bound",
    "load_bound_data",
    "pod_basis",
    "project",
    "reduced_output",
    "residual",
    "sobol_certified",
    "sobol_meta_interval",
    "sobol_point_estimate",
    "solve_reduced",
    "stability_constant",
    "t1",
    "train_goal_oriented",
    "transport_time_march",
]
