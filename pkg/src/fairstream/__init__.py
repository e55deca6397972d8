"""Streaming submodular maximization under per-color fairness constraints."""

from fairstream.core import (
    ContractViolation,
    ExtendabilityTracker,
    FairnessSpec,
    GroundSet,
    InfeasibleInstanceError,
    excess_ratio,
    fairness_error,
    is_extendable,
    is_feasible,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "ExtendabilityTracker",
    "FairnessSpec",
    "GroundSet",
    "InfeasibleInstanceError",
    "excess_ratio",
    "fairness_error",
    "is_extendable",
    "is_feasible",
]
