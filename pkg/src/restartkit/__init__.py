"""Restart strategies for run-until-threshold stochastic processes.

Models any seeded run-until-success computation as a Las Vegas algorithm,
diagnoses heavy-tailed runtime distributions, and computes and executes
restart schedules that cut the expected completion time. Ships a
from-scratch single-hidden-layer MLP trainer as the built-in case study.
"""

from .dataset import Dataset, FoldSplit, kfold_split, load_thyroid, save_thyroid, scale_min_max
from .errors import (
    AllTrialsFailedError,
    DegenerateTailError,
    DivergenceError,
    InsufficientDataError,
    ParseError,
    RunLogFormatError,
)
from .mlp import (
    MlpConfig,
    MlpProcess,
    MlpState,
    backprop_gradients,
    forward,
    init_weights,
    train_epoch,
    train_until,
    training_error,
)
from .runner import (
    LasVegasProcess,
    RunRecord,
    RunSample,
    SummaryStats,
    collect_runs,
    derive_seed,
    load_runs,
    save_runs,
    summary_stats,
)
from .strategies import (
    FixedSchedule,
    LubySchedule,
    McResult,
    RestartSchedule,
    StrategyOutcome,
    WalshSchedule,
    evaluate_strategy_mc,
    expected_time_curve,
    fixed_cutoff_expected_time,
    luby_term,
    optimal_cutoff,
    parse_schedule,
    run_with_strategy,
    schedule_cutoff,
)
from .synth import (
    Constant,
    DiscretePareto,
    Geometric,
    SyntheticLaw,
    SyntheticProcess,
    TwoPoint,
    exact_cdf,
    exact_ecdf,
    parse_law,
    sample,
)
from .tailstats import (
    Ecdf,
    cdf_at,
    empirical_cdf,
    expected_remaining,
    hill_estimator,
    hill_from_values,
    loglog_tail_slope,
    remaining_time_profile,
    restart_profitable,
    survival,
    survival_table,
)

__version__ = "0.1.0"

__all__ = [
    "AllTrialsFailedError",
    "Constant",
    "Dataset",
    "DegenerateTailError",
    "DiscretePareto",
    "DivergenceError",
    "Ecdf",
    "FixedSchedule",
    "FoldSplit",
    "Geometric",
    "InsufficientDataError",
    "LasVegasProcess",
    "LubySchedule",
    "McResult",
    "MlpConfig",
    "MlpProcess",
    "MlpState",
    "ParseError",
    "RestartSchedule",
    "RunLogFormatError",
    "RunRecord",
    "RunSample",
    "StrategyOutcome",
    "SummaryStats",
    "SyntheticLaw",
    "SyntheticProcess",
    "TwoPoint",
    "WalshSchedule",
    "backprop_gradients",
    "cdf_at",
    "collect_runs",
    "derive_seed",
    "empirical_cdf",
    "evaluate_strategy_mc",
    "exact_cdf",
    "exact_ecdf",
    "expected_remaining",
    "expected_time_curve",
    "fixed_cutoff_expected_time",
    "forward",
    "hill_estimator",
    "hill_from_values",
    "init_weights",
    "kfold_split",
    "load_runs",
    "load_thyroid",
    "loglog_tail_slope",
    "luby_term",
    "optimal_cutoff",
    "parse_law",
    "parse_schedule",
    "remaining_time_profile",
    "restart_profitable",
    "run_with_strategy",
    "sample",
    "save_runs",
    "save_thyroid",
    "scale_min_max",
    "schedule_cutoff",
    "summary_stats",
    "survival",
    "survival_table",
    "train_epoch",
    "train_until",
    "training_error",
]
