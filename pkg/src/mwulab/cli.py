"""Command-line front end.

Three subcommands, all writing CSV (and optionally SVG / matplotlib figures):

* ``run``        one configuration, one CSV row per trial;
* ``sweep``      a list of expert counts, one aggregated row per n;
* ``trajectory`` per-round mean corrupted/honest weight totals.

Exit codes: 0 success, 2 invalid configuration, 3 enumeration or table
budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import adaptive, core, harness, reports
from .solver import TableBudgetExceeded


def _eta_arg(value: str):
    return "auto" if value == "auto" else float(value)


def _resolution_arg(value: str):
    return None if value in ("auto", "none") else float(value)


def _int_list(value: str) -> list[int]:
    try:
        return [int(part) for part in value.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {value!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwulab",
        description="Weighted-majority coin simulations under greedy adversaries.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau-frac", type=float, default=harness.DEFAULT_TAU_FRACTION,
                        help="corrupted fraction of n (default 0.1)")
    common.add_argument("--tau", type=int, default=None,
                        help="absolute corrupted count (overrides --tau-frac)")
    common.add_argument("--eta", type=_eta_arg, default="auto",
                        help="update factor, or 'auto' for sqrt(ln n / n)")
    common.add_argument("--adversary", choices=harness.ADVERSARIES, default="none")
    common.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-rounds", type=int, default=core.DEFAULT_MAX_ROUNDS)
    common.add_argument("--hidden", choices=core.HIDDEN_POLICIES, default="uniform",
                        help="hidden-direction policy")
    common.add_argument("--solver", choices=("auto", "bruteforce", "dp"), default="auto")
    common.add_argument("--dp-resolution", type=_resolution_arg, default=None,
                        help="DP grid resolution, or 'auto'")
    common.add_argument("--enum-budget", type=int, default=adaptive.DEFAULT_ENUM_BUDGET,
                        help="adaptive search: max candidate subsets per round")
    common.add_argument("--allow-large-adaptive", action="store_true",
                        help="lift the n<=%d cap on adaptive runs" % harness.ADAPTIVE_N_CAP)
    common.add_argument("--out", required=True, help="CSV output path")
    common.add_argument("--svg", default=None, help="optional SVG line-plot path")
    common.add_argument("--fig", default=None,
                        help="optional matplotlib figure path (png/pdf)")

    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", parents=[common], help="run one configuration")
    p_run.add_argument("--n", type=int, required=True)
    p_sweep = sub.add_parser("sweep", parents=[common], help="sweep over expert counts")
    p_sweep.add_argument("--n", type=_int_list, required=True,
                         help="comma-separated expert counts, e.g. 100,200,300")
    p_traj = sub.add_parser("trajectory", parents=[common],
                            help="per-round corrupted weight trajectory")
    p_traj.add_argument("--n", type=int, required=True)
    return parser


def _config(args, n: int) -> harness.SimConfig:
    config = harness.SimConfig(
        n=n,
        tau_fraction=args.tau_frac,
        tau=args.tau,
        eta=args.eta,
        adversary=args.adversary,
        trials=args.trials,
        seed=args.seed,
        max_rounds=args.max_rounds,
        hidden_policy=args.hidden,
        solver_backend=args.solver,
        dp_resolution=args.dp_resolution,
        enum_budget=args.enum_budget,
        allow_large_adaptive=args.allow_large_adaptive,
    )
    config.validate()
    return config


def _plots(args, series, x_label: str, y_label: str, title: str) -> None:
    if args.svg:
        reports.emit_svg(series, args.svg, x_label=x_label, y_label=y_label, title=title)
    if args.fig:
        reports.render_figure(series, args.fig, x_label=x_label, y_label=y_label, title=title)


def _cmd_run(args) -> int:
    config = _config(args, args.n)
    records = harness.run_trials(config)
    good = [r for r in records if r.error is None]
    reports.emit_csv(good, args.out, reports.TRIAL_COLUMNS)
    if good:
        series = [("rounds", [r.trial_id for r in good], [float(r.rounds) for r in good])]
        _plots(args, series, "trial", "rounds",
               f"rounds to success (n={config.n}, {config.adversary})")
    print(f"wrote {args.out} ({len(good)} trials)")
    errored = [r for r in records if r.error is not None]
    if errored:
        for r in errored:
            print(f"trial {r.trial_id} errored: {r.error}", file=sys.stderr)
        return 3
    return 0


def _cmd_sweep(args) -> int:
    configs = [_config(args, n) for n in args.n]
    rows = harness.run_sweep(configs)
    reports.emit_csv(rows, args.out, reports.SWEEP_COLUMNS)
    series = [("mean rounds", [r.n for r in rows], [r.mean_rounds for r in rows])]
    _plots(args, series, "experts (n)", "mean rounds to success",
           f"rounds vs n ({args.adversary})")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_trajectory(args) -> int:
    config = _config(args, args.n)
    rows = harness.run_trajectory(config)
    reports.emit_csv(rows, args.out, reports.TRAJECTORY_COLUMNS)
    series = [
        ("corrupted", [r.round for r in rows], [r.mean_corrupted_weight for r in rows]),
        ("honest", [r.round for r in rows], [r.mean_good_weight for r in rows]),
    ]
    _plots(args, series, "round", "mean total weight",
           f"weight trajectory (n={config.n}, tau={config.resolved_tau()})")
    print(f"wrote {args.out} ({len(rows)} rounds)")
    return 0


_COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "trajectory": _cmd_trajectory}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except harness.ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except (adaptive.SearchBudgetExceeded, TableBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
