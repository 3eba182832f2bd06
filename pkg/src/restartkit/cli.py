"""Command-line surface for the restart toolkit.

Subcommands: `collect` (run a process many times and log the runs),
`tail` (heavy-tail diagnostics over a run log), `optimize` (best fixed
cutoff from a run log), `sweep` (Monte Carlo comparison of restart
schedules), and `restart-run` (trace a single strategy execution).

Every subcommand is deterministic given its flags: all randomness flows
from --seed. Reports go to stdout as tab-separated tables with a header
line; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import dataset as ds
from . import mlp, runner, strategies, synth, tailstats
from .errors import (
    AllTrialsFailedError,
    DegenerateTailError,
    InsufficientDataError,
    ParseError,
    RunLogFormatError,
)

_ERRORS = (
    AllTrialsFailedError,
    DegenerateTailError,
    InsufficientDataError,
    ParseError,
    RunLogFormatError,
    OSError,
    ValueError,
)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0,1), got {value}")
    return value


def _gamma_list(text: str) -> list[float]:
    try:
        gammas = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gamma list: {text!r}") from None
    if not gammas:
        raise argparse.ArgumentTypeError("gamma list is empty")
    for g in gammas:
        if not g > 1.0:
            raise argparse.ArgumentTypeError(f"gamma must be > 1, got {g}")
    return gammas


def _add_process_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument(
        "--data", metavar="PATH", help="ann-format dataset file for the MLP process"
    )
    src.add_argument(
        "--stub",
        metavar="SPEC",
        help="synthetic process, e.g. two-point:0.5:1:10, geometric:0.1, "
        "discrete-pareto:1.5, constant:7",
    )
    p.add_argument(
        "--stub-cap",
        type=_positive_int,
        default=1_000_000,
        help="censoring cap for stub processes (default 1000000)",
    )
    defaults = mlp.MlpConfig()
    p.add_argument(
        "--hidden", type=_positive_int, default=defaults.n_hidden, help="hidden units"
    )
    p.add_argument(
        "--delta",
        type=_positive_float,
        default=defaults.target_error,
        help="target training error",
    )
    p.add_argument(
        "--lr", type=_positive_float, default=defaults.learning_rate, help="learning rate"
    )
    p.add_argument(
        "--momentum", type=float, default=defaults.momentum, help="momentum term"
    )
    p.add_argument(
        "--init",
        type=float,
        default=defaults.init_half_width,
        help="half-width of the uniform weight init",
    )
    p.add_argument(
        "--max-epochs",
        type=_positive_int,
        default=defaults.max_epochs,
        help="censoring cap per training run",
    )
    p.add_argument(
        "--no-scale",
        action="store_true",
        help="skip min-max feature scaling",
    )
    p.add_argument(
        "--folds",
        type=_positive_int,
        default=None,
        help="number of cross-validation folds; train on one fold's training part",
    )
    p.add_argument(
        "--fold",
        type=_nonneg_int,
        default=0,
        help="which fold's training partition to use (with --folds)",
    )


def _build_process(args: argparse.Namespace) -> runner.LasVegasProcess:
    if args.stub is not None:
        return synth.SyntheticProcess(
            law=synth.parse_law(args.stub), cap_epochs=args.stub_cap
        )
    data = ds.load_thyroid(args.data)
    if not args.no_scale:
        data = ds.scale_min_max(data)
    note = ""
    if args.folds is not None:
        if args.fold >= args.folds:
            raise ValueError(f"--fold must be < --folds, got {args.fold}")
        split = ds.kfold_split(data.n_rows, args.folds, args.seed)[args.fold]
        data = data.subset(split.train_indices)
        note = f"fold={args.fold}/{args.folds}"
    cfg = mlp.MlpConfig(
        n_inputs=data.n_features,
        n_hidden=args.hidden,
        n_outputs=data.n_outputs,
        learning_rate=args.lr,
        momentum=args.momentum,
        init_half_width=args.init,
        target_error=args.delta,
        max_epochs=args.max_epochs,
    )
    return mlp.MlpProcess(cfg=cfg, data=data, note=note)


def _write_table(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(str(v) for v in row) + "\n")


def cmd_collect(args: argparse.Namespace) -> int:
    process = _build_process(args)
    sample = runner.collect_runs(process, args.runs, args.seed, n_jobs=args.jobs)
    runner.save_runs(sample, args.out)
    stats = runner.summary_stats(sample)
    print("n_runs\tconverged\tcensored\tmean\tstddev\tratio")
    print(
        f"{sample.n_runs}\t{stats.n_converged}\t{stats.n_censored}"
        f"\t{stats.mean:.3f}\t{stats.stddev:.3f}\t{100.0 * stats.ratio:.1f}%"
    )
    return 0


def cmd_tail(args: argparse.Namespace) -> int:
    sample = runner.load_runs(args.runs_file)
    ecdf = tailstats.empirical_cdf(sample)
    m = sample.n_converged
    r = max(2, int(args.r_fraction * m))
    profitable = tailstats.restart_profitable(sample)
    print("statistic\tvalue")
    print(f"converged\t{m}")
    print(f"censored\t{sample.n_censored}")
    # Degenerate samples (e.g. constant epochs) still get a profitability
    # verdict; the affected estimators report why they are unavailable.
    try:
        alpha = tailstats.hill_estimator(sample, r)
        print(f"hill_alpha\t{alpha:.4f}")
        print(f"hill_mean_log_spacing\t{1.0 / alpha:.4f}")
    except (DegenerateTailError, InsufficientDataError, ValueError) as exc:
        print(f"hill_alpha\tn/a ({exc})")
    print(f"hill_r\t{r}")
    try:
        slope = tailstats.loglog_tail_slope(sample, args.tail_fraction)
        print(f"loglog_tail_slope\t{slope:.4f}")
    except InsufficientDataError as exc:
        print(f"loglog_tail_slope\tn/a ({exc})")
    if profitable:
        print(f"restart_profitable\tyes ({len(profitable)} tau values)")
        print(f"first_profitable_tau\t{profitable[0]}")
    else:
        print("restart_profitable\tno (no tau)")
    if args.survival_out:
        rows = [(t, f"{s:.10g}") for t, s in tailstats.survival_table(ecdf)]
        _write_table(args.survival_out, ["t", "survival"], rows)
    if args.loglog_out:
        rows = [
            (f"{math.log(t):.10g}", f"{math.log(s):.10g}")
            for t, s in tailstats.survival_table(ecdf)
            if s > 0.0
        ]
        _write_table(args.loglog_out, ["log_t", "log_survival"], rows)
    if args.remaining_out:
        rows = [
            (tau, f"{mean:.6f}", n, f"{se:.6f}")
            for tau, mean, n, se in tailstats.remaining_time_profile(sample)
        ]
        _write_table(
            args.remaining_out, ["tau", "expected_remaining", "n", "stderr"], rows
        )
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    sample = runner.load_runs(args.runs_file)
    ecdf = tailstats.empirical_cdf(sample)
    stats = runner.summary_stats(sample)
    t_star, expected = strategies.optimal_cutoff(ecdf)
    reduction = 100.0 * (stats.mean - expected) / stats.mean
    print("t_star\texpected_epochs\tno_restart_mean\treduction")
    print(f"{t_star}\t{expected:.3f}\t{stats.mean:.3f}\t{reduction:.1f}%")
    if args.curve_out:
        rows = [
            (t, f"{e:.6f}" if math.isfinite(e) else "inf")
            for t, e in strategies.expected_time_curve(ecdf)
        ]
        _write_table(args.curve_out, ["t", "expected_epochs"], rows)
    return 0


def _sweep_schedules(args: argparse.Namespace) -> list[strategies.RestartSchedule]:
    scheds: list[strategies.RestartSchedule] = [
        strategies.WalshSchedule(gamma=g) for g in args.gammas
    ]
    if args.luby_unit is not None:
        scheds.append(strategies.LubySchedule(unit=args.luby_unit))
    if args.fixed is not None:
        scheds.append(strategies.FixedSchedule(t=args.fixed))
    return scheds


def cmd_sweep(args: argparse.Namespace) -> int:
    process = _build_process(args)
    budget = args.budget if args.budget is not None else 20 * process.cap
    baseline_sample = runner.collect_runs(
        process, args.trials, args.seed, n_jobs=args.jobs
    )
    baseline = runner.summary_stats(baseline_sample)
    print("schedule\tmean_epochs\tstderr\tfailure_rate\treduction")
    print(
        f"none\t{baseline.mean:.3f}\t"
        f"{baseline.stddev / math.sqrt(baseline.n_converged):.3f}\t"
        f"{baseline.n_censored / baseline_sample.n_runs:.4f}\t0.0%"
    )
    # Every schedule reuses the same base seed: common random numbers make
    # the schedule comparison sharper than independent seeding would.
    for sched in _sweep_schedules(args):
        try:
            res = strategies.evaluate_strategy_mc(
                process, sched, args.trials, args.seed, budget, n_jobs=args.jobs
            )
        except AllTrialsFailedError:
            print(f"{sched.describe()}\tall-failed\t-\t1.0000\t-")
            continue
        reduction = 100.0 * (baseline.mean - res.mean_epochs) / baseline.mean
        print(
            f"{sched.describe()}\t{res.mean_epochs:.3f}\t{res.stderr:.3f}"
            f"\t{res.failure_rate:.4f}\t{reduction:.1f}%"
        )
    return 0


def cmd_restart_run(args: argparse.Namespace) -> int:
    process = _build_process(args)
    schedule = strategies.parse_schedule(args.schedule)
    budget = args.budget if args.budget is not None else 20 * process.cap
    outcome = strategies.run_with_strategy(process, schedule, args.seed, budget)
    print("attempt\tcutoff\tepochs_used")
    for i, (cutoff, used) in enumerate(outcome.per_attempt, start=1):
        print(f"{i}\t{cutoff}\t{used}")
    status = "succeeded" if outcome.succeeded else "budget-exhausted"
    print(
        f"# {status}: attempts={outcome.attempts} total_epochs={outcome.total_epochs}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="restartkit",
        description="Model run-until-threshold processes as Las Vegas algorithms, "
        "diagnose heavy-tailed runtimes, and evaluate restart strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collect", help="run a process repeatedly and log the runs")
    _add_process_flags(p)
    p.add_argument("--runs", type=_positive_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", required=True, metavar="PATH", help="run-log path")
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("tail", help="heavy-tail diagnostics over a run log")
    p.add_argument("--runs-file", required=True, metavar="PATH")
    p.add_argument("--r-fraction", type=_fraction, default=0.1)
    p.add_argument("--tail-fraction", type=_fraction, default=0.1)
    p.add_argument("--survival-out", metavar="PATH")
    p.add_argument("--loglog-out", metavar="PATH")
    p.add_argument("--remaining-out", metavar="PATH")
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("optimize", help="optimal fixed cutoff from a run log")
    p.add_argument("--runs-file", required=True, metavar="PATH")
    p.add_argument("--curve-out", metavar="PATH")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="compare restart schedules by Monte Carlo")
    _add_process_flags(p)
    p.add_argument(
        "--gammas",
        type=_gamma_list,
        default=[float(g) for g in range(2, 11)],
        help="comma-separated Walsh gammas (default 2..10)",
    )
    p.add_argument("--luby-unit", type=_positive_int, default=None)
    p.add_argument("--fixed", type=_positive_int, default=None)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--budget", type=_positive_int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("restart-run", help="trace one strategy execution")
    _add_process_flags(p)
    p.add_argument("--schedule", required=True, help="fixed:t | walsh:gamma | luby:unit")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--budget", type=_positive_int, default=None)
    p.set_defaults(func=cmd_restart_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"restartkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
