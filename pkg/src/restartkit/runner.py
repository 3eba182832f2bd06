"""Las Vegas process contract, bulk run collection, and run-log persistence.

A Las Vegas process is anything that can be attempted under an epoch cutoff
and reports back how long it ran and whether it hit its goal. Runs are
collected under per-index derived seeds so a whole batch is reproducible
from a single base seed, regardless of execution order or parallelism.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import DivergenceError, InsufficientDataError, RunLogFormatError

_MASK64 = (1 << 64) - 1


def derive_seed(base_seed: int, index: int) -> int:
    """Seed for run `index` of a batch started from `base_seed`.

    SplitMix64 finalizer applied to ``base_seed XOR index``, all arithmetic
    mod 2**64. Pinned so run logs are reproducible across implementations:

        z = (base ^ index) + 0x9E3779B97F4A7C15
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        seed = z ^ (z >> 31)
    """
    z = ((base_seed ^ index) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RunRecord:
    """One completion-time observation of a Las Vegas process.

    `epochs` is the observed running time T when `converged`, otherwise the
    cutoff the run was censored at. `diverged` flags runs aborted by a
    numeric failure; for those, `final_error` is the last finite objective.
    """

    seed: int
    epochs: int
    converged: bool
    final_error: float
    diverged: bool = False

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.seed < 0:
            raise ValueError(f"seed must be unsigned, got {self.seed}")


@runtime_checkable
class LasVegasProcess(Protocol):
    """Behavioral contract for a restartable randomized process.

    `attempt(seed, cutoff)` runs at most `cutoff` epochs and is a pure
    function of its arguments. If an attempt converges at epoch e, any
    attempt with the same seed and cutoff >= e converges at the same e.
    `cap` is the default censoring cutoff for plain (no-restart) runs.
    """

    @property
    def cap(self) -> int: ...

    def describe(self) -> str: ...

    def attempt(self, seed: int, cutoff: int) -> RunRecord: ...


@dataclass(frozen=True)
class RunSample:
    """An ordered collection of runs sharing one censoring cap."""

    records: list[RunRecord]
    cap: int
    metadata: str = ""

    def __post_init__(self) -> None:
        if self.cap < 1:
            raise ValueError(f"cap must be >= 1, got {self.cap}")
        for i, r in enumerate(self.records):
            if r.epochs > self.cap:
                raise ValueError(f"record {i}: epochs {r.epochs} exceeds cap {self.cap}")
            if not r.converged and not r.diverged and r.epochs != self.cap:
                raise ValueError(
                    f"record {i}: censored run must carry epochs == cap, "
                    f"got {r.epochs} != {self.cap}"
                )

    @property
    def n_runs(self) -> int:
        return len(self.records)

    @property
    def n_converged(self) -> int:
        return sum(1 for r in self.records if r.converged)

    @property
    def n_censored(self) -> int:
        return len(self.records) - self.n_converged

    def converged_epochs(self) -> np.ndarray:
        """Completion times of converged runs, in record order (int64)."""
        return np.array(
            [r.epochs for r in self.records if r.converged], dtype=np.int64
        )


@dataclass(frozen=True)
class SummaryStats:
    """Sample mean/deviation of completion time over converged runs."""

    mean: float
    stddev: float
    ratio: float
    n_converged: int
    n_censored: int


def _attempt_one(args: tuple[LasVegasProcess, int, int]) -> RunRecord:
    process, seed, cutoff = args
    try:
        return process.attempt(seed, cutoff)
    except DivergenceError:
        # Numeric failures are recorded, never abort the batch.
        return RunRecord(
            seed=seed,
            epochs=cutoff,
            converged=False,
            final_error=float("nan"),
            diverged=True,
        )


def collect_runs(
    process: LasVegasProcess,
    n_runs: int,
    base_seed: int,
    n_jobs: int = 1,
) -> RunSample:
    """Run `process` `n_runs` times under derived seeds and collect records.

    records[i] uses seed ``derive_seed(base_seed, i)`` and the process cap
    as cutoff. The result is identical for any `n_jobs`: records are keyed
    by index, and attempts share no mutable state.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    cap = process.cap
    jobs = [(process, derive_seed(base_seed, i), cap) for i in range(n_runs)]
    if n_jobs > 1:
        chunk = max(1, n_runs // (n_jobs * 8))
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            records = list(pool.map(_attempt_one, jobs, chunksize=chunk))
    else:
        records = [_attempt_one(j) for j in jobs]
    meta = f"process={process.describe()} base_seed={base_seed} n_runs={n_runs}"
    return RunSample(records=records, cap=cap, metadata=meta)


def summary_stats(sample: RunSample) -> SummaryStats:
    """Mean, sample standard deviation, and their ratio over converged runs.

    Censored runs are excluded from the moments; their count is reported so
    the exclusion is always visible.
    """
    epochs = sample.converged_epochs()
    if epochs.size < 2:
        raise InsufficientDataError(
            f"need >= 2 converged runs for summary statistics, have {epochs.size}"
        )
    mean = float(np.mean(epochs))
    stddev = float(np.std(epochs, ddof=1))
    return SummaryStats(
        mean=mean,
        stddev=stddev,
        ratio=stddev / mean,
        n_converged=int(epochs.size),
        n_censored=sample.n_censored,
    )


def _record_line(r: RunRecord) -> str:
    obj: dict = {
        "seed": r.seed,
        "epochs": r.epochs,
        "converged": r.converged,
        "final_error": r.final_error,
    }
    if r.diverged:
        obj["diverged"] = True
    return json.dumps(obj, separators=(",", ":"))


def save_runs(sample: RunSample, path) -> None:
    """Write a run log: a JSON header line, then one JSON record per line."""
    header = json.dumps(
        {"cap": sample.cap, "metadata": sample.metadata}, separators=(",", ":")
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for r in sample.records:
            fh.write(_record_line(r) + "\n")


def _parse_record(obj: dict, lineno: int) -> RunRecord:
    for key in ("seed", "epochs", "converged", "final_error"):
        if key not in obj:
            raise RunLogFormatError(f"line {lineno}: missing field '{key}'")
    seed, epochs, conv = obj["seed"], obj["epochs"], obj["converged"]
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise RunLogFormatError(f"line {lineno}: 'seed' must be an integer")
    if not isinstance(epochs, int) or isinstance(epochs, bool):
        raise RunLogFormatError(f"line {lineno}: 'epochs' must be an integer")
    if not isinstance(conv, bool):
        raise RunLogFormatError(f"line {lineno}: 'converged' must be a boolean")
    err = obj["final_error"]
    if not isinstance(err, (int, float)) or isinstance(err, bool):
        raise RunLogFormatError(f"line {lineno}: 'final_error' must be numeric")
    return RunRecord(
        seed=seed,
        epochs=epochs,
        converged=conv,
        final_error=float(err),
        diverged=bool(obj.get("diverged", False)),
    )


def load_runs(path) -> RunSample:
    """Read a run log written by `save_runs` (lossless round trip)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise InsufficientDataError(f"run log {path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise RunLogFormatError(f"line 1: invalid header: {exc}") from exc
    if not isinstance(header, dict) or "cap" not in header:
        raise RunLogFormatError("line 1: header must carry 'cap'")
    cap = header["cap"]
    if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
        raise RunLogFormatError("line 1: 'cap' must be a positive integer")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RunLogFormatError(f"line {lineno}: invalid record: {exc}") from exc
        if not isinstance(obj, dict):
            raise RunLogFormatError(f"line {lineno}: record must be an object")
        records.append(_parse_record(obj, lineno))
    if not records:
        raise InsufficientDataError(f"run log {path} has no records")
    return RunSample(records=records, cap=cap, metadata=str(header.get("metadata", "")))
