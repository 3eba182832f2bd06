"""Restart schedules and their evaluation.

A schedule maps the attempt index i >= 1 to a cutoff t_i. The process is
re-seeded and re-run whenever a cutoff elapses without success. Under a
known distribution the optimal schedule is a fixed cutoff minimizing

    E[S_t] = (t - sum_{t' < t} q(t')) / q(t),

with q(t) = Pr(T <= t); when the distribution is unknown, geometric
(Walsh) or Luby universal schedules apply.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import AllTrialsFailedError
from .runner import LasVegasProcess, derive_seed
from .tailstats import Ecdf, cdf_at


class RestartSchedule:
    """Rule producing the cutoff for attempt i >= 1."""

    def cutoff(self, attempt: int) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FixedSchedule(RestartSchedule):
    """t_i = t for every attempt."""

    t: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError(f"fixed cutoff must be >= 1, got {self.t}")

    def cutoff(self, attempt: int) -> int:
        _check_attempt(attempt)
        return self.t

    def describe(self) -> str:
        return f"fixed:{self.t}"


@dataclass(frozen=True)
class WalshSchedule(RestartSchedule):
    """Geometric cutoffs t_i = ceil(gamma^(i-1)), gamma > 1."""

    gamma: float

    def __post_init__(self) -> None:
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")

    def cutoff(self, attempt: int) -> int:
        _check_attempt(attempt)
        return int(math.ceil(self.gamma ** (attempt - 1)))

    def describe(self) -> str:
        return f"walsh:{self.gamma:g}"


@dataclass(frozen=True)
class LubySchedule(RestartSchedule):
    """t_i = unit * L_i where L is the universal sequence 1,1,2,1,1,2,4,..."""

    unit: int

    def __post_init__(self) -> None:
        if self.unit < 1:
            raise ValueError(f"luby unit must be >= 1, got {self.unit}")

    def cutoff(self, attempt: int) -> int:
        _check_attempt(attempt)
        return self.unit * luby_term(attempt)

    def describe(self) -> str:
        return f"luby:{self.unit}"


def _check_attempt(attempt: int) -> None:
    if attempt < 1:
        raise ValueError(f"attempt index must be >= 1, got {attempt}")


def luby_term(i: int) -> int:
    """i-th term of the Luby universal sequence (always a power of two).

    L_i = 2^(k-1) when i = 2^k - 1, else L_i = L_{i - 2^(k-1) + 1} for
    2^(k-1) <= i < 2^k - 1.
    """
    _check_attempt(i)
    k = i.bit_length()
    while i != (1 << k) - 1:
        i = i - (1 << (k - 1)) + 1
        k = i.bit_length()
    return 1 << (k - 1)


def schedule_cutoff(schedule: RestartSchedule, attempt: int) -> int:
    """Cutoff t_i the schedule assigns to attempt i (1-based)."""
    return schedule.cutoff(attempt)


def parse_schedule(spec: str) -> RestartSchedule:
    """Parse `fixed:t`, `walsh:gamma`, or `luby:unit`."""
    parts = spec.split(":")
    try:
        if parts[0] == "fixed" and len(parts) == 2:
            return FixedSchedule(t=int(parts[1]))
        if parts[0] == "walsh" and len(parts) == 2:
            return WalshSchedule(gamma=float(parts[1]))
        if parts[0] == "luby" and len(parts) == 2:
            return LubySchedule(unit=int(parts[1]))
    except ValueError as exc:
        raise ValueError(f"bad schedule spec '{spec}': {exc}") from exc
    raise ValueError(
        f"bad schedule spec '{spec}': expected fixed:t, walsh:gamma, or luby:unit"
    )


def _sum_cdf_below(ecdf: Ecdf, t: int) -> float:
    """sum_{t'=1}^{t-1} q(t') for the stepwise-constant empirical q."""
    support = ecdf.support
    cum = ecdf.cum_prob
    total = 0.0
    for j in range(len(support)):
        lo = int(support[j])
        if lo > t - 1:
            break
        hi = int(support[j + 1]) - 1 if j + 1 < len(support) else t - 1
        hi = min(hi, t - 1)
        total += float(cum[j]) * (hi - lo + 1)
    return total


def fixed_cutoff_expected_time(ecdf: Ecdf, t: int) -> float:
    """Expected total epochs of the fixed-cutoff strategy S_t.

    Returns (t - sum_{t' < t} q(t')) / q(t). When q(t) = 0 the strategy
    can never succeed and the expectation is infinite; math.inf is
    returned rather than raising.
    """
    if t < 1:
        raise ValueError(f"cutoff must be >= 1, got {t}")
    q = cdf_at(ecdf, t)
    if q == 0.0:
        return math.inf
    return (t - _sum_cdf_below(ecdf, t)) / q


def optimal_cutoff(ecdf: Ecdf) -> tuple[int, float]:
    """Minimizer of the fixed-cutoff expected time, scanned over support.

    Between support points q is constant and the expected time is
    nondecreasing in t, so the minimum lies on a support point; ties break
    toward the smaller cutoff. Returns (t_star, expected_epochs).
    """
    support = ecdf.support
    cum = ecdf.cum_prob
    best_t = int(support[0])
    best_e = math.inf
    running = 0.0  # sum_{t'=1}^{s_j - 1} q(t')
    for j in range(len(support)):
        s_j = int(support[j])
        e_j = (s_j - running) / float(cum[j])
        if e_j < best_e:
            best_e = e_j
            best_t = s_j
        if j + 1 < len(support):
            running += float(cum[j]) * (int(support[j + 1]) - s_j)
    return best_t, best_e


def expected_time_curve(ecdf: Ecdf) -> list[tuple[int, float]]:
    """(t, E[S_t]) at every support point, for the cutoff-sweep plot."""
    return [(int(t), fixed_cutoff_expected_time(ecdf, int(t))) for t in ecdf.support]


@dataclass(frozen=True)
class StrategyOutcome:
    """Trace of one strategy execution.

    `per_attempt` lists (cutoff, epochs_used) in attempt order;
    `total_epochs` is their epoch sum. A failed outcome means the epoch
    budget was exhausted before any attempt converged.
    """

    total_epochs: int
    attempts: int
    succeeded: bool
    per_attempt: list[tuple[int, int]]


def run_with_strategy(
    process: LasVegasProcess,
    schedule: RestartSchedule,
    base_seed: int,
    budget: int,
) -> StrategyOutcome:
    """Execute the restart schedule against the process until success.

    Attempt i runs under seed derive_seed(base_seed, i) and cutoff t_i.
    A converged attempt ends the execution; a censored one costs its full
    cutoff. The execution stops unsuccessfully before any attempt whose
    cutoff would push the accumulated epochs past `budget`.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    total = 0
    per_attempt: list[tuple[int, int]] = []
    i = 1
    while True:
        t_i = schedule.cutoff(i)
        if total + t_i > budget:
            return StrategyOutcome(
                total_epochs=total,
                attempts=i - 1,
                succeeded=False,
                per_attempt=per_attempt,
            )
        record = process.attempt(derive_seed(base_seed, i), t_i)
        per_attempt.append((t_i, record.epochs))
        total += record.epochs
        if record.converged:
            return StrategyOutcome(
                total_epochs=total,
                attempts=i,
                succeeded=True,
                per_attempt=per_attempt,
            )
        i += 1


@dataclass(frozen=True)
class McResult:
    """Monte Carlo estimate of a schedule's expected total epochs."""

    mean_epochs: float
    stderr: float
    failure_rate: float
    n_trials: int
    n_succeeded: int


def _run_trial(
    args: tuple[LasVegasProcess, RestartSchedule, int, int],
) -> tuple[bool, int]:
    process, schedule, seed, budget = args
    outcome = run_with_strategy(process, schedule, seed, budget)
    return outcome.succeeded, outcome.total_epochs


def evaluate_strategy_mc(
    process: LasVegasProcess,
    schedule: RestartSchedule,
    n_trials: int,
    base_seed: int,
    budget: int,
    n_jobs: int = 1,
) -> McResult:
    """Estimate the schedule's expected total epochs over seeded trials.

    Trial j runs `run_with_strategy` under base seed
    derive_seed(base_seed, j). Mean and standard error are taken over
    succeeded trials; the failure rate counts budget exhaustions. The
    result is invariant under `n_jobs`.
    """
    if n_trials < 2:
        raise ValueError(f"n_trials must be >= 2, got {n_trials}")
    jobs = [
        (process, schedule, derive_seed(base_seed, j), budget)
        for j in range(n_trials)
    ]
    if n_jobs > 1:
        chunk = max(1, n_trials // (n_jobs * 8))
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            outcomes = list(pool.map(_run_trial, jobs, chunksize=chunk))
    else:
        outcomes = [_run_trial(j) for j in jobs]
    totals = np.array([t for ok, t in outcomes if ok], dtype=np.float64)
    n_succ = totals.size
    if n_succ == 0:
        raise AllTrialsFailedError(
            f"all {n_trials} trials of {schedule.describe()} exhausted "
            f"budget={budget} without success"
        )
    stderr = (
        float(np.std(totals, ddof=1) / math.sqrt(n_succ)) if n_succ >= 2 else math.nan
    )
    return McResult(
        mean_epochs=float(np.mean(totals)),
        stderr=stderr,
        failure_rate=(n_trials - n_succ) / n_trials,
        n_trials=n_trials,
        n_succeeded=int(n_succ),
    )
