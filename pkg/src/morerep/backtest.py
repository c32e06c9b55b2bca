"""Online replay of a match corpus.

Each match is predicted from pre-match reputations, then its score is turned
into two opinions and fed to the engine. Matches are bucketed by the home
side's relative strength into ten bins, and per-bin home-win and away-win
frequencies are reported next to the 3/1/0 baseline.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .conversion import (
    ConversionConfig,
    MatchResult,
    NormBounds,
    Strategy,
    compute_norm_bounds,
    convert,
)
from .distributions import BINARY
from .engine import DecayParams, ReputationLedger
from .prediction import (
    LeagueTable,
    Outcome,
    PredictionConfig,
    baseline_predict,
    baseline_update,
    outcome_of,
    predict,
    relative_strength,
)

logger = logging.getLogger(__name__)

N_BINS = 10


class UnsortedCorpusError(ValueError):
    pass


def bin_of(r: float) -> int:
    """Index 1..10 of the relative-strength interval holding ``r``.

    Intervals are half-open ``[0, 0.1), [0.1, 0.2), ...`` except the last,
    which is closed at 1.
    """
    if not 0.0 <= r <= 1.0 or math.isnan(r):
        raise ValueError(f"relative strength must lie in [0, 1], got {r!r}")
    k = math.floor(r * N_BINS) + 1
    return min(k, N_BINS)


@dataclass
class BinStats:
    n: list[int] = field(default_factory=lambda: [0] * N_BINS)
    home: list[int] = field(default_factory=lambda: [0] * N_BINS)
    away: list[int] = field(default_factory=lambda: [0] * N_BINS)
    draw: list[int] = field(default_factory=lambda: [0] * N_BINS)

    def add(self, k: int, result: Outcome) -> None:
        i = k - 1
        self.n[i] += 1
        if result is Outcome.HOME_WIN:
            self.home[i] += 1
        elif result is Outcome.AWAY_WIN:
            self.away[i] += 1
        else:
            self.draw[i] += 1

    def nonempty(self) -> list[int]:
        return [k for k in range(1, N_BINS + 1) if self.n[k - 1] > 0]

    def f_home(self, k: int) -> float | None:
        n = self.n[k - 1]
        return self.home[k - 1] / n if n else None

    def f_away(self, k: int) -> float | None:
        n = self.n[k - 1]
        return self.away[k - 1] / n if n else None

    def f_draw(self, k: int) -> float | None:
        n = self.n[k - 1]
        return self.draw[k - 1] / n if n else None


@dataclass(frozen=True)
class MatchPrediction:
    date: int
    home: Hashable
    away: Hashable
    rep_home: float
    rep_away: float
    r: float
    bin: int
    predicted: Outcome
    baseline: Outcome
    actual: Outcome


@dataclass
class BacktestReport:
    strategy: Strategy
    nu: float
    kappa: float
    epsilon: float
    x: float
    normalize: bool
    bins: BinStats = field(default_factory=BinStats)
    predictions: list[MatchPrediction] = field(default_factory=list)
    skipped: list[tuple[int, str]] = field(default_factory=list)
    error: str | None = None

    @property
    def matches(self) -> int:
        return len(self.predictions)

    @property
    def accuracy(self) -> float | None:
        if not self.predictions:
            return None
        return sum(p.predicted is p.actual for p in self.predictions) / len(self.predictions)

    @property
    def baseline_accuracy(self) -> float | None:
        if not self.predictions:
            return None
        return sum(p.baseline is p.actual for p in self.predictions) / len(self.predictions)

    def f_home(self) -> dict[int, float]:
        return {k: self.bins.f_home(k) for k in self.bins.nonempty()}

    def f_away(self) -> dict[int, float]:
        return {k: self.bins.f_away(k) for k in self.bins.nonempty()}


def run_backtest(
    matches: Sequence[MatchResult],
    conv: ConversionConfig = ConversionConfig(),
    decay: DecayParams = DecayParams(),
    pred: PredictionConfig = PredictionConfig(),
    bounds: NormBounds | None = None,
) -> BacktestReport:
    """Predict-then-update replay of ``matches`` (must be sorted by date).

    For normalized GMV the bounds default to a pre-pass over ``matches``;
    pass ``bounds`` explicitly to keep the run strictly online.
    """
    for i in range(1, len(matches)):
        if matches[i].date < matches[i - 1].date:
            raise UnsortedCorpusError(
                f"match {i} dated {matches[i].date} precedes match {i - 1} dated {matches[i - 1].date}"
            )
    report = BacktestReport(
        conv.strategy, decay.nu, decay.kappa, pred.epsilon, conv.x, conv.normalize
    )
    if conv.strategy is Strategy.GMV and conv.normalize and bounds is None and matches:
        bounds = compute_norm_bounds(matches, conv)

    ledger = ReputationLedger(BINARY, decay)
    table = LeagueTable()
    for i, match in enumerate(matches):
        try:
            opinions = convert(match, conv, bounds)
        except ValueError as exc:
            logger.warning("skipping match %d: %s", i, exc)
            report.skipped.append((i, str(exc)))
            continue
        rep_home = ledger.reputation(match.home, match.date)
        rep_away = ledger.reputation(match.away, match.date)
        r = relative_strength(rep_home, rep_away)
        k = bin_of(r)
        actual = outcome_of(match)
        report.predictions.append(
            MatchPrediction(
                match.date,
                match.home,
                match.away,
                rep_home,
                rep_away,
                r,
                k,
                predict(r, pred),
                baseline_predict(table, match),
                actual,
            )
        )
        report.bins.add(k, actual)
        ledger.update_simultaneous(opinions)
        baseline_update(table, match)
    return report


def _run_one(args: tuple) -> BacktestReport:
    matches, strategy, x, normalize, nu, kappa, epsilon = args
    try:
        conv = ConversionConfig(strategy, x, normalize)
        decay = DecayParams(nu, kappa)
        return run_backtest(matches, conv, decay, PredictionConfig(epsilon))
    except Exception as exc:  # noqa: BLE001 - one failed run must not sink the sweep
        logger.error("backtest %s nu=%s failed: %s", strategy.value, nu, exc)
        return BacktestReport(strategy, nu, kappa, epsilon, x, normalize, error=str(exc))


def sweep(
    matches: Sequence[MatchResult],
    strategies: Iterable[Strategy | str],
    nus: Iterable[float],
    kappa: float = 365.0,
    epsilon: float = 0.05,
    x: float = 1.0,
    normalize: bool = True,
    workers: int = 1,
) -> list[BacktestReport]:
    """One isolated backtest per (strategy, nu) pair, in grid order."""
    strategies = [Strategy(s) for s in strategies]
    nus = list(nus)
    if not strategies or not nus:
        raise ValueError("sweep grids must be non-empty")
    jobs = [(matches, s, x, normalize, nu, kappa, epsilon) for s in strategies for nu in nus]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(job) for job in jobs]
