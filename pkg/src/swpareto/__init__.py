"""Sliding-window 3-objective Pareto optimization for chance-constrained problems."""

from .archive import (
    Individual,
    Objective3,
    ParetoArchive,
    dominates_strict_3d,
    dominates_weak_3d,
)
from .bench import ExperimentConfig, ResultRow, extract_final, run_experiment
from .engine import (
    FAST_DEFAULTS,
    RunResult,
    SlidingParams,
    mutate_plus,
    run_fast_sw_gsemo3d,
    run_gsemo2d,
    run_gsemo3d,
    run_one_plus_one_ea,
    run_sw_gsemo3d,
    sliding_window,
)
from .graph import Graph, count_dominated, flip_update, load_edge_list
from .oracles import brute_force_front, compute_breakpoints, greedy_front
from .problems import (
    DEFAULT_BETAS,
    ConfidenceLevel,
    ProblemInstance,
    StochasticWeights,
    evaluate,
    gen_degree_weights,
    gen_uniform_weights,
    normal_quantile,
    surrogate_weight,
)
from .stats import SampleSummary, mann_whitney_p, summarize

__version__ = "0.1.0"

__all__ = [
    "ConfidenceLevel",
    "DEFAULT_BETAS",
    "ExperimentConfig",
    "FAST_DEFAULTS",
    "Graph",
    "Individual",
    "Objective3",
    "ParetoArchive",
    "ProblemInstance",
    "ResultRow",
    "RunResult",
    "SampleSummary",
    "SlidingParams",
    "StochasticWeights",
    "brute_force_front",
    "compute_breakpoints",
    "count_dominated",
    "dominates_strict_3d",
    "dominates_weak_3d",
    "evaluate",
    "extract_final",
    "flip_update",
    "gen_degree_weights",
    "gen_uniform_weights",
    "greedy_front",
    "load_edge_list",
    "mann_whitney_p",
    "mutate_plus",
    "normal_quantile",
    "run_experiment",
    "run_fast_sw_gsemo3d",
    "run_gsemo2d",
    "run_gsemo3d",
    "run_one_plus_one_ea",
    "run_sw_gsemo3d",
    "sliding_window",
    "summarize",
    "surrogate_weight",
]
