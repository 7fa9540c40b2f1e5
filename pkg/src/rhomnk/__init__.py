"""Multiobjective NK-landscapes with tunable objective correlation, and
set-based fitness-landscape analysis driven by the hypervolume indicator."""

from .copula import CorrelationMatrix, sample_correlated_uniform, validate
from .errors import *  # noqa: F401,F403
from .harness import SweepConfig, derive_seed, run_sweep, summarize
from .landscape import (
    InstanceParams,
    RhoMnkInstance,
    evaluate,
    evaluate_incremental,
    evaluate_many,
    generate,
    load_instance,
    save_instance,
)
from .pareto import dominates, hypervolume, hypervolume_mc, nondominated_filter
from .setspace import (
    SearchSpace,
    SearchSpaceKind,
    SolutionSet,
    deletion_neighbors,
    enumerate_replacement_neighbors,
    insertion_neighbors,
    member_of,
    random_set,
    sample_replacement_neighbor,
)
from .walks import (
    AutocorrelationResult,
    WalkRecord,
    adaptive_walk,
    autocorrelation,
    local_optimum_check,
    nondominated_count,
    random_walk,
)

__version__ = "0.1.0"
