"""Empirical distribution machinery for completion-time samples.

Covers the diagnostic chain for deciding whether restarts can pay off:
empirical CDF and survival function, log-log tail slope, the Hill tail
index, and the conditional expected remaining time E[T - tau | T > tau].

Convention: the CDF is q(t) = Pr(T <= t). Censored runs count in the
denominator of q (they provably ran past every t up to the cap) but are
excluded from moment estimates, which biases conditional means downward
and therefore makes the restart-profitability test conservative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTailError, InsufficientDataError
from .runner import RunSample

MIN_TAIL_RECORDS = 10


@dataclass(frozen=True)
class Ecdf:
    """Step-function estimate of q(t) = Pr(T <= t) with censoring mass.

    `support` holds the distinct observed completion times (strictly
    increasing); `cum_prob[j]` is q(support[j]). The final cumulative value
    equals 1 - censored_mass.
    """

    support: np.ndarray
    cum_prob: np.ndarray
    censored_mass: float
    cap: int

    def __post_init__(self) -> None:
        s, c = self.support, self.cum_prob
        if len(s) != len(c) or len(s) == 0:
            raise ValueError("support and cum_prob must be equal-length, non-empty")
        if np.any(np.diff(s) <= 0):
            raise ValueError("support must be strictly increasing")
        if np.any(np.diff(c) < 0) or c[0] <= 0.0:
            raise ValueError("cum_prob must be positive and nondecreasing")
        if s[-1] > self.cap:
            raise ValueError(f"support exceeds cap={self.cap}")
        if not math.isclose(c[-1], 1.0 - self.censored_mass, abs_tol=1e-12):
            raise ValueError("final cum_prob must equal 1 - censored_mass")


def empirical_cdf(sample: RunSample) -> Ecdf:
    """Estimate q(t) from a run sample.

    q(t) counts converged runs with epochs <= t over all runs, censored
    included; the censored fraction is carried separately.
    """
    epochs = sample.converged_epochs()
    if epochs.size == 0:
        raise InsufficientDataError("no converged runs; cannot build an ECDF")
    n_total = sample.n_runs
    support, counts = np.unique(epochs, return_counts=True)
    cum = np.cumsum(counts) / n_total
    return Ecdf(
        support=support.astype(np.int64),
        cum_prob=cum.astype(np.float64),
        censored_mass=sample.n_censored / n_total,
        cap=sample.cap,
    )


def cdf_at(ecdf: Ecdf, t: int) -> float:
    """q(t) = Pr(T <= t), stepwise-constant between support points."""
    idx = int(np.searchsorted(ecdf.support, t, side="right")) - 1
    if idx < 0:
        return 0.0
    return float(ecdf.cum_prob[idx])


def survival(ecdf: Ecdf, t: int) -> float:
    """Pr(T > t); the censored mass survives beyond the cap."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    return 1.0 - cdf_at(ecdf, t)


def survival_table(ecdf: Ecdf) -> list[tuple[int, float]]:
    """(t, Pr(T > t)) at each distinct support value, for plotting."""
    return [(int(t), 1.0 - float(q)) for t, q in zip(ecdf.support, ecdf.cum_prob)]


def loglog_tail_slope(sample: RunSample, tail_fraction: float) -> float:
    """Least-squares slope of log Pr(T > t) against log t over the tail.

    The tail is the largest `tail_fraction` of converged completion times;
    the fit uses one point per distinct support value (ties carry no extra
    weight) and drops points where the survival estimate is zero. For a
    polynomially decaying tail the slope approximates -alpha.
    """
    if not 0.0 < tail_fraction < 1.0:
        raise ValueError(f"tail_fraction must be in (0,1), got {tail_fraction}")
    epochs = np.sort(sample.converged_epochs())
    m = epochs.size
    n_tail = int(math.ceil(tail_fraction * m))
    if n_tail < MIN_TAIL_RECORDS:
        raise InsufficientDataError(
            f"tail holds {n_tail} records; need >= {MIN_TAIL_RECORDS}"
        )
    threshold = epochs[m - n_tail]
    ecdf = empirical_cdf(sample)
    pts = [
        (math.log(t), math.log(s))
        for t, s in survival_table(ecdf)
        if t >= threshold and s > 0.0
    ]
    if len(pts) < 2:
        raise InsufficientDataError(
            "tail has fewer than 2 distinct points with positive survival"
        )
    xs, ys = zip(*pts)
    slope, _ = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(slope)


def hill_from_values(values: np.ndarray, r: int) -> float:
    """Hill tail-index estimate from raw positive values.

    With order statistics T_(1) <= ... <= T_(m), computes the mean log
    spacing H = (1/r) * sum_{j=1..r} ln T_(m-j+1) - ln T_(m-r) and returns
    alpha_hat = 1/H. Scale-invariant: multiplying all values by a positive
    constant leaves the estimate unchanged.
    """
    vals = np.sort(np.asarray(values, dtype=np.float64))
    m = vals.size
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    if r >= m:
        raise ValueError(f"r must be < sample size {m}, got {r}")
    if vals[0] <= 0.0:
        raise ValueError("values must be positive")
    # H = 0 exactly when the whole top-r window equals the reference order
    # statistic; test that structurally, since a mean of identical logs can
    # land an ulp away from zero.
    if vals[m - 1] == vals[m - r - 1]:
        raise DegenerateTailError(
            f"top {r} order statistics are all equal; tail index undefined"
        )
    h = float(np.mean(np.log(vals[m - r :])) - np.log(vals[m - r - 1]))
    return 1.0 / h


def hill_estimator(sample: RunSample, r: int) -> float:
    """Hill tail-index estimate over the converged completion times."""
    epochs = sample.converged_epochs()
    if epochs.size == 0:
        raise InsufficientDataError("no converged runs for the Hill estimator")
    return hill_from_values(epochs.astype(np.float64), r)


def expected_remaining(sample: RunSample, tau: int) -> float:
    """E[T - tau | T > tau] over converged runs.

    Censored runs are excluded even though they also survive past tau, so
    the estimate is biased low: restart profitability is under-, never
    over-stated.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    epochs = sample.converged_epochs()
    beyond = epochs[epochs > tau]
    if beyond.size == 0:
        raise InsufficientDataError(f"no converged runs beyond tau={tau}")
    return float(np.mean(beyond - tau))


def remaining_time_profile(
    sample: RunSample,
) -> list[tuple[int, float, int, float]]:
    """(tau, E[T-tau|T>tau], n_survivors, stderr) over the observed support.

    Rows start at tau=0 (where the conditional mean equals the plain mean)
    and cover every distinct completion time that still has converged runs
    beyond it. stderr is NaN when fewer than 2 survivors remain.
    """
    epochs = np.sort(sample.converged_epochs())
    if epochs.size == 0:
        raise InsufficientDataError("no converged runs")
    taus = [0] + [int(t) for t in np.unique(epochs)[:-1]]
    out = []
    for tau in taus:
        beyond = epochs[epochs > tau] - tau
        n = int(beyond.size)
        stderr = float(np.std(beyond, ddof=1) / math.sqrt(n)) if n >= 2 else math.nan
        out.append((tau, float(np.mean(beyond)), n, stderr))
    return out


def restart_profitable(sample: RunSample) -> list[int]:
    """Every tau on the observed support where E[T] < E[T-tau|T>tau].

    E[T] is the converged-sample mean. An empty list means no point of the
    support shows a strict advantage to abandoning the run. Sampling noise
    is not filtered here; callers needing significance should compare
    against the stderr column of `remaining_time_profile`.
    """
    profile = remaining_time_profile(sample)
    baseline = profile[0][1]
    return [tau for tau, mean, _, _ in profile if tau > 0 and mean > baseline]
