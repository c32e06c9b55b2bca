"""Serialization of backtest reports: JSON document, plot-ready CSVs and a
plain-text table. Floats are written with 9 significant digits so repeated runs
produce byte-identical files."""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence, TextIO

from .backtest import N_BINS, BacktestReport


def fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def _num(value: float | None) -> float | None:
    return None if value is None else float(f"{value:.9g}")


def report_to_dict(report: BacktestReport) -> dict:
    bins = []
    for k in report.bins.nonempty():
        b = report.bins
        bins.append(
            {
                "bin": k,
                "lower": (k - 1) / N_BINS,
                "upper": k / N_BINS,
                "n": b.n[k - 1],
                "home_wins": b.home[k - 1],
                "away_wins": b.away[k - 1],
                "draws": b.draw[k - 1],
                "f_home": _num(b.f_home(k)),
                "f_away": _num(b.f_away(k)),
            }
        )
    return {
        "strategy": report.strategy.value,
        "nu": report.nu,
        "kappa": report.kappa,
        "epsilon": report.epsilon,
        "x": report.x,
        "normalize": report.normalize,
        "matches": report.matches,
        "accuracy": _num(report.accuracy),
        "baseline_accuracy": _num(report.baseline_accuracy),
        "skipped": len(report.skipped),
        "error": report.error,
        "bins": bins,
    }


def report_json(report: BacktestReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n"


def write_bins_csv(report: BacktestReport, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["bin", "lower", "upper", "n", "home_wins", "away_wins", "draws", "f_home", "f_away"])
    b = report.bins
    for k in b.nonempty():
        writer.writerow(
            [
                k,
                fmt((k - 1) / N_BINS),
                fmt(k / N_BINS),
                b.n[k - 1],
                b.home[k - 1],
                b.away[k - 1],
                b.draw[k - 1],
                fmt(b.f_home(k)),
                fmt(b.f_away(k)),
            ]
        )


def write_predictions_csv(report: BacktestReport, fh: TextIO) -> None:
    from .dataio import timestamp_to_date

    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ["date", "home", "away", "rep_home", "rep_away", "r", "bin", "predicted", "baseline", "actual"]
    )
    for p in report.predictions:
        writer.writerow(
            [
                timestamp_to_date(p.date).isoformat(),
                p.home,
                p.away,
                fmt(p.rep_home),
                fmt(p.rep_away),
                fmt(p.r),
                p.bin,
                p.predicted.value,
                p.baseline.value,
                p.actual.value,
            ]
        )


def write_comparison_csv(reports: Sequence[BacktestReport], fh: TextIO) -> None:
    """Long-format table: one row per (strategy, nu, bin)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ["strategy", "nu", "bin", "n", "f_home", "f_away", "accuracy", "baseline_accuracy", "error"]
    )
    for rep in reports:
        if rep.error or not rep.bins.nonempty():
            writer.writerow([rep.strategy.value, fmt(rep.nu), "", 0, "", "", "", "", rep.error or ""])
            continue
        for k in rep.bins.nonempty():
            writer.writerow(
                [
                    rep.strategy.value,
                    fmt(rep.nu),
                    k,
                    rep.bins.n[k - 1],
                    fmt(rep.bins.f_home(k)),
                    fmt(rep.bins.f_away(k)),
                    fmt(rep.accuracy),
                    fmt(rep.baseline_accuracy),
                    "",
                ]
            )


def format_table(report: BacktestReport) -> str:
    out = io.StringIO()
    out.write(
        f"strategy={report.strategy.value} nu={report.nu:g} kappa={report.kappa:g} "
        f"epsilon={report.epsilon:g} x={report.x:g} normalize={report.normalize}\n"
    )
    out.write(f"matches: {report.matches}\n")
    if report.error:
        out.write(f"error: {report.error}\n")
    if report.matches:
        out.write(f"model accuracy: {report.accuracy:.4f}\n")
        out.write(f"3/1/0 accuracy: {report.baseline_accuracy:.4f}\n")
    out.write(f"{'bin':>4} {'interval':>12} {'n':>6} {'F_H':>7} {'F_A':>7}\n")
    b = report.bins
    for k in b.nonempty():
        interval = f"[{(k - 1) / N_BINS:.1f},{k / N_BINS:.1f}{']' if k == N_BINS else ')'}"
        out.write(f"{k:>4} {interval:>12} {b.n[k - 1]:>6} {b.f_home(k):>7.3f} {b.f_away(k):>7.3f}\n")
    return out.getvalue()
