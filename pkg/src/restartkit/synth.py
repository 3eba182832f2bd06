"""Closed-form synthetic runtime laws used as oracles.

Each law yields integer completion times by inverse-CDF sampling from a
single uniform per seed, so expected-time formulas can be checked against
both exact CDFs and Monte Carlo runs of the same process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .runner import RunRecord
from .tailstats import Ecdf


def _mix64(seeds: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer over a uint64 array (wraps mod 2**64)."""
    z = seeds + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _uniforms(seeds: np.ndarray) -> np.ndarray:
    """One deterministic uniform in [0, 1) per seed."""
    return _mix64(seeds.astype(np.uint64)) / np.float64(2**64)


class SyntheticLaw:
    """A distribution over positive-integer completion times."""

    def sample_many(self, seeds: np.ndarray) -> np.ndarray:
        """Inverse-CDF draw for each seed (int64 array)."""
        raise NotImplementedError

    def cdf(self, t: int) -> float:
        """Closed-form Pr(T <= t)."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(SyntheticLaw):
    """T = c with probability 1."""

    c: int

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValueError(f"constant time must be >= 1, got {self.c}")

    def sample_many(self, seeds: np.ndarray) -> np.ndarray:
        return np.full(len(seeds), self.c, dtype=np.int64)

    def cdf(self, t: int) -> float:
        return 1.0 if t >= self.c else 0.0

    def describe(self) -> str:
        return f"constant:{self.c}"


@dataclass(frozen=True)
class TwoPoint(SyntheticLaw):
    """T = a with probability p, else b (a < b)."""

    p: float
    a: int
    b: int

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must be in (0,1), got {self.p}")
        if not 1 <= self.a < self.b:
            raise ValueError(f"need 1 <= a < b, got a={self.a}, b={self.b}")

    def sample_many(self, seeds: np.ndarray) -> np.ndarray:
        u = _uniforms(seeds)
        return np.where(u < self.p, self.a, self.b).astype(np.int64)

    def cdf(self, t: int) -> float:
        if t < self.a:
            return 0.0
        if t < self.b:
            return self.p
        return 1.0

    def describe(self) -> str:
        return f"two-point:{self.p}:{self.a}:{self.b}"


@dataclass(frozen=True)
class Geometric(SyntheticLaw):
    """Memoryless law on {1, 2, ...}: Pr(T <= t) = 1 - (1-p)^t."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must be in (0,1), got {self.p}")

    def sample_many(self, seeds: np.ndarray) -> np.ndarray:
        u = _uniforms(seeds)
        t = np.ceil(np.log1p(-u) / np.log1p(-self.p)).astype(np.int64)
        return np.maximum(t, 1)

    def cdf(self, t: int) -> float:
        if t < 1:
            return 0.0
        return float(-np.expm1(t * np.log1p(-self.p)))

    def describe(self) -> str:
        return f"geometric:{self.p}"


@dataclass(frozen=True)
class DiscretePareto(SyntheticLaw):
    """Ceiling of a continuous Pareto(alpha, x_min) draw.

    Survival keeps the polynomial decay of the underlying continuous law:
    Pr(T <= t) = 1 - (x_min / t)^alpha at integer t >= x_min.
    """

    alpha: float
    x_min: int = 1

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.x_min < 1:
            raise ValueError(f"x_min must be >= 1, got {self.x_min}")

    def sample_many(self, seeds: np.ndarray) -> np.ndarray:
        u = _uniforms(seeds)
        x = self.x_min * (1.0 - u) ** (-1.0 / self.alpha)
        return np.ceil(x).astype(np.int64)

    def cdf(self, t: int) -> float:
        if t < self.x_min:
            return 0.0
        return 1.0 - (self.x_min / t) ** self.alpha

    def describe(self) -> str:
        return f"discrete-pareto:{self.alpha}:{self.x_min}"


def sample(law: SyntheticLaw, seed: int) -> int:
    """Single deterministic draw for `seed` (same value `sample_many` gives)."""
    return int(law.sample_many(np.array([seed], dtype=np.uint64))[0])


def exact_cdf(law: SyntheticLaw, t: int) -> float:
    """Closed-form Pr(T <= t) for the law."""
    return law.cdf(t)


def exact_ecdf(law: SyntheticLaw, cap: int) -> Ecdf:
    """The law's true distribution packaged as an Ecdf truncated at `cap`.

    Support holds every t <= cap where the CDF is positive and increases;
    mass beyond the cap is reported as censored, mirroring what an infinite
    empirical sample capped at `cap` would estimate.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    support: list[int] = []
    cum: list[float] = []
    prev = 0.0
    for t in range(1, cap + 1):
        f = law.cdf(t)
        if f > prev:
            support.append(t)
            cum.append(f)
            prev = f
    if not support:
        raise ValueError(f"law {law.describe()} has no mass at or below cap={cap}")
    return Ecdf(
        support=np.array(support, dtype=np.int64),
        cum_prob=np.array(cum, dtype=np.float64),
        censored_mass=1.0 - prev,
        cap=cap,
    )


@dataclass(frozen=True)
class SyntheticProcess:
    """LasVegasProcess adapter over a synthetic law.

    An attempt draws the law once for its seed; it converges if the drawn
    time fits within the cutoff and otherwise is censored at the cutoff.
    """

    law: SyntheticLaw
    cap_epochs: int = 1_000_000

    @property
    def cap(self) -> int:
        return self.cap_epochs

    def describe(self) -> str:
        return f"stub({self.law.describe()},cap={self.cap_epochs})"

    def attempt(self, seed: int, cutoff: int) -> RunRecord:
        if cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {cutoff}")
        t = sample(self.law, seed)
        if t <= cutoff:
            return RunRecord(seed=seed, epochs=t, converged=True, final_error=0.0)
        return RunRecord(seed=seed, epochs=cutoff, converged=False, final_error=1.0)


def parse_law(spec: str) -> SyntheticLaw:
    """Parse the CLI stub grammar `name:param:param...` into a law.

    Grammar: `constant:c`, `two-point:p:a:b`, `geometric:p`,
    `discrete-pareto:alpha[:x_min]`.
    """
    parts = spec.split(":")
    name, args = parts[0], parts[1:]
    try:
        if name == "constant" and len(args) == 1:
            return Constant(c=int(args[0]))
        if name == "two-point" and len(args) == 3:
            return TwoPoint(p=float(args[0]), a=int(args[1]), b=int(args[2]))
        if name == "geometric" and len(args) == 1:
            return Geometric(p=float(args[0]))
        if name == "discrete-pareto" and len(args) in (1, 2):
            x_min = int(args[1]) if len(args) == 2 else 1
            return DiscretePareto(alpha=float(args[0]), x_min=x_min)
    except ValueError as exc:
        raise ValueError(f"bad stub spec '{spec}': {exc}") from exc
    raise ValueError(
        f"bad stub spec '{spec}': expected constant:c, two-point:p:a:b, "
        f"geometric:p, or discrete-pareto:alpha[:x_min]"
    )
