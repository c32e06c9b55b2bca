"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from . import dataio, reporting
from .approx import ExperimentConfig, run_experiment
from .backtest import bin_of, run_backtest, sweep
from .conversion import ConversionConfig, Strategy, compute_norm_bounds, convert
from .dataio import DataError
from .distributions import BINARY
from .engine import DecayParams, ReputationLedger, process_odb
from .prediction import PredictionConfig, predict, relative_strength

logger = logging.getLogger("morerep")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    nu: float
    kappa: float
    x: float
    epsilon: float
    strategy: str
    normalize: bool
    time_unit: str = "days"
    bins: int = 10


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _strategies(text: str) -> list[Strategy]:
    try:
        return [Strategy(v.strip().lower()) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"unknown strategy in {text!r}") from exc


def _time(text: str) -> int:
    try:
        return dataio._parse_time(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer time or ISO date: {text!r}") from exc


def _add_decay(p: argparse.ArgumentParser, nu: float = 0.6, kappa: float = 365.0) -> None:
    p.add_argument("--nu", type=float, default=nu, help=f"decay rate in [0, 1] (default {nu})")
    p.add_argument("--kappa", type=float, default=kappa, help=f"grace period in days (default {kappa:g})")


def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", type=float, default=1.0, help="GMV goal gift (default 1)")
    p.add_argument("--epsilon", type=float, default=0.05, help="draw band half-width (default 0.05)")
    p.add_argument("--no-normalize", action="store_true", help="skip GMV normalization")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morerep", description="reputation engine and football backtests")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("backtest", help="replay a match corpus and score predictions")
    p.add_argument("--matches", required=True, type=Path)
    p.add_argument(
        "--strategy", type=Strategy, choices=list(Strategy), default=Strategy.GMV, metavar="{naive,mv,gmv}"
    )
    _add_decay(p)
    _add_model(p)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("sweep", help="backtests over a strategy x nu grid")
    p.add_argument("--matches", required=True, type=Path)
    p.add_argument("--strategies", type=_strategies, default=list(Strategy))
    p.add_argument("--nus", type=_floats, default=[0.5, 0.6, 0.7])
    p.add_argument("--kappa", type=float, default=365.0)
    _add_model(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("approx", help="exact vs incremental group opinion error trace")
    p.add_argument("--per-year", type=int, default=10)
    p.add_argument("--years", type=int, default=6)
    _add_decay(p, nu=0.98, kappa=5.0)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--space-size", type=int, default=2)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("rank", help="reputation table from opinions or a snapshot")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--opinions", type=Path)
    src.add_argument("--snapshot", type=Path)
    p.add_argument("--at", type=_time, default=None, help="query time (default: latest update)")
    _add_decay(p)

    p = sub.add_parser("predict", help="predict one fixture from the matches before it")
    p.add_argument("--matches", required=True, type=Path)
    p.add_argument("--home", required=True)
    p.add_argument("--away", required=True)
    p.add_argument("--date", required=True, type=_time)
    p.add_argument(
        "--strategy", type=Strategy, choices=list(Strategy), default=Strategy.GMV, metavar="{naive,mv,gmv}"
    )
    _add_decay(p)
    _add_model(p)

    p = sub.add_parser("gen", help="write a synthetic league corpus")
    p.add_argument("--teams", type=int, default=20)
    p.add_argument("--seasons", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("snapshot", help="save or load ledger state")
    snap = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    s = snap.add_parser("save", help="process opinions and save the ledger")
    s.add_argument("--opinions", required=True, type=Path)
    _add_decay(s)
    s.add_argument("--out", required=True, type=Path)
    s = snap.add_parser("load", help="load a ledger, print it, optionally re-save")
    s.add_argument("--snapshot", required=True, type=Path)
    s.add_argument("--at", type=_time, default=None)
    s.add_argument("--out", type=Path, default=None)
    return parser


def _conv(args: argparse.Namespace, strategy: Strategy) -> ConversionConfig:
    return ConversionConfig(strategy, args.x, not args.no_normalize)


def _load_matches(path: Path) -> list:
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    matches = dataio.parse_matches(path)
    print(dataio.format_summary(dataio.summarize(matches)), file=sys.stderr)
    return matches


def _ledger_from_opinions(
    path: Path, params: DecayParams, until: int | None = None
) -> ReputationLedger | None:
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    space, report = dataio.load_opinions(path)
    for rej in report.rejected:
        print(f"{path}: rejected {rej}", file=sys.stderr)
    if space is None:
        return None
    opinions = [op for op in report.items if until is None or op.time <= until]
    return process_odb(opinions, space, params).ledger


def _print_ranking(ledger: ReputationLedger | None, at: int | None) -> None:
    print("agent,reputation")
    if ledger is None or not ledger.states:
        return
    if at is None:
        at = max(st.last_update for st in ledger.states.values())
    reps = ledger.reputations(at)
    for agent, rep in sorted(reps.items(), key=lambda kv: (-kv[1], str(kv[0]))):
        print(f"{agent},{rep:.9g}")


def cmd_backtest(args: argparse.Namespace) -> int:
    matches = _load_matches(args.matches)
    conv = _conv(args, args.strategy)
    decay = DecayParams(args.nu, args.kappa)
    report = run_backtest(matches, conv, decay, PredictionConfig(args.epsilon))
    args.out.mkdir(parents=True, exist_ok=True)
    cfg = RunConfig(args.nu, args.kappa, args.x, args.epsilon, conv.strategy.value, conv.normalize)
    (args.out / "run_config.json").write_text(json.dumps(asdict(cfg), indent=2, sort_keys=True) + "\n")
    (args.out / "report.json").write_text(reporting.report_json(report))
    table = reporting.format_table(report)
    (args.out / "report.txt").write_text(table)
    with open(args.out / "bins.csv", "w", newline="") as fh:
        reporting.write_bins_csv(report, fh)
    with open(args.out / "predictions.csv", "w", newline="") as fh:
        reporting.write_predictions_csv(report, fh)
    sys.stdout.write(table)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    matches = _load_matches(args.matches)
    reports = sweep(
        matches,
        args.strategies,
        args.nus,
        kappa=args.kappa,
        epsilon=args.epsilon,
        x=args.x,
        normalize=not args.no_normalize,
        workers=args.workers,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    for rep in reports:
        name = f"report_{rep.strategy.value}_nu{rep.nu:g}.json"
        (args.out / name).write_text(reporting.report_json(rep))
        if rep.error:
            print(f"{rep.strategy.value} nu={rep.nu:g}: {rep.error}", file=sys.stderr)
    with open(args.out / "comparison.csv", "w", newline="") as fh:
        reporting.write_comparison_csv(reports, fh)
    for rep in reports:
        if rep.error is None and rep.matches:
            print(
                f"{rep.strategy.value:>5} nu={rep.nu:<5g} accuracy={rep.accuracy:.4f} "
                f"baseline={rep.baseline_accuracy:.4f}"
            )
    return EXIT_OK if all(r.error is None for r in reports) else EXIT_DATA


def cmd_approx(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        opinions_per_year=args.per_year,
        years=args.years,
        decay=DecayParams(args.nu, args.kappa),
        repeats=args.repeats,
        seed=args.seed,
        space_size=args.space_size,
    )
    trace = run_experiment(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "trace.csv", "w", newline="") as fh:
        trace.write_csv(fh)
    peak = int(trace.mean.argmax())
    print(
        f"peak mean EMD {trace.mean[peak]:.4f} at opinion {peak + 1}; "
        f"final {trace.mean[-1]:.4f} at opinion {len(trace)}"
    )
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    if args.snapshot is not None:
        if not args.snapshot.exists():
            raise UsageError(f"no such file: {args.snapshot}")
        ledger = dataio.load_ledger(args.snapshot)
    else:
        ledger = _ledger_from_opinions(args.opinions, DecayParams(args.nu, args.kappa), args.at)
    _print_ranking(ledger, args.at)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    if args.home == args.away:
        raise UsageError("home and away must differ")
    matches = [m for m in _load_matches(args.matches) if m.date < args.date]
    conv = _conv(args, args.strategy)
    decay = DecayParams(args.nu, args.kappa)
    bounds = None
    if conv.strategy is Strategy.GMV and conv.normalize and matches:
        bounds = compute_norm_bounds(matches, conv)
    ledger = ReputationLedger(BINARY, decay)
    for m in matches:
        ledger.update_simultaneous(convert(m, conv, bounds))
    rep_home = ledger.reputation(args.home, args.date)
    rep_away = ledger.reputation(args.away, args.date)
    r = relative_strength(rep_home, rep_away)
    outcome = predict(r, PredictionConfig(args.epsilon))
    print(f"home={args.home} reputation={rep_home:.9g}")
    print(f"away={args.away} reputation={rep_away:.9g}")
    print(f"r={r:.9g} bin={bin_of(r)} outcome={outcome.name}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    matches = dataio.gen_synthetic(args.teams, args.seasons, args.seed)
    header = f"{dataio.GENERATOR_LAW}\nteams={args.teams} seasons={args.seasons} seed={args.seed}"
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        dataio.write_matches(matches, fh, comment=header)
    print(dataio.format_summary(dataio.summarize(matches)), file=sys.stderr)
    return EXIT_OK


def cmd_snapshot(args: argparse.Namespace) -> int:
    if args.action == "save":
        ledger = _ledger_from_opinions(args.opinions, DecayParams(args.nu, args.kappa))
        if ledger is None:
            raise DataError(f"{args.opinions}: no opinions to snapshot")
        dataio.save_ledger(ledger, args.out)
        print(f"saved {len(ledger)} agents to {args.out}", file=sys.stderr)
        return EXIT_OK
    if not args.snapshot.exists():
        raise UsageError(f"no such file: {args.snapshot}")
    ledger = dataio.load_ledger(args.snapshot)
    if args.out is not None:
        dataio.save_ledger(ledger, args.out)
    _print_ranking(ledger, args.at)
    return EXIT_OK


COMMANDS = {
    "backtest": cmd_backtest,
    "sweep": cmd_sweep,
    "approx": cmd_approx,
    "rank": cmd_rank,
    "predict": cmd_predict,
    "gen": cmd_gen,
    "snapshot": cmd_snapshot,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"morerep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"morerep: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # parameter range violations raised by the model types
        print(f"morerep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
