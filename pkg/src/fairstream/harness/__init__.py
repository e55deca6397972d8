from fairstream.harness.bounds import BoundsRepairWarning, proportional_bounds, segment_coloring
from fairstream.harness.brute import (
    BruteForceCapError,
    brute_force_opt,
    brute_force_opt_unpruned,
)
from fairstream.harness.experiment import (
    ORDER_POLICIES,
    ExperimentConfig,
    ExperimentResult,
    elements_last,
    run_experiment,
    summarize,
)
from fairstream.harness.hardness import HardnessInstance, choose_fraction, gen_hardness

__all__ = [
    "ORDER_POLICIES",
    "BoundsRepairWarning",
    "BruteForceCapError",
    "ExperimentConfig",
    "ExperimentResult",
    "HardnessInstance",
    "brute_force_opt",
    "brute_force_opt_unpruned",
    "choose_fraction",
    "elements_last",
    "gen_hardness",
    "proportional_bounds",
    "run_experiment",
    "segment_coloring",
    "summarize",
]
