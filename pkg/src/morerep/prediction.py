"""Relative strength, three-way outcome prediction and the 3/1/0 points baseline."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Hashable

from .conversion import MatchResult


class Outcome(str, Enum):
    HOME_WIN = "H"
    DRAW = "D"
    AWAY_WIN = "A"


def outcome_of(match: MatchResult) -> Outcome:
    if match.home_goals > match.away_goals:
        return Outcome.HOME_WIN
    if match.home_goals < match.away_goals:
        return Outcome.AWAY_WIN
    return Outcome.DRAW


@dataclass(frozen=True)
class PredictionConfig:
    """``epsilon`` is the half-width of the draw band around 1/2."""

    epsilon: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon!r}")


def relative_strength(rep_home: float, rep_away: float) -> float:
    """``rep_home / (rep_home + rep_away)``; two zero reputations give 0.5."""
    total = rep_home + rep_away
    if total <= 0.0:
        return 0.5
    return rep_home / total


def predict(r: float, cfg: PredictionConfig = PredictionConfig()) -> Outcome:
    if r > 0.5 + cfg.epsilon:
        return Outcome.HOME_WIN
    if r < 0.5 - cfg.epsilon:
        return Outcome.AWAY_WIN
    return Outcome.DRAW


class LeagueTable:
    """Points per (season, team) under the 3/1/0 scheme.

    Points are scoped to a season, so every season starts from zero.
    """

    def __init__(self) -> None:
        self.points: dict[tuple[str | None, Hashable], int] = defaultdict(int)

    def get(self, season: str | None, team: Hashable) -> int:
        return self.points.get((season, team), 0)

    def season_total(self, season: str | None) -> int:
        return sum(p for (s, _), p in self.points.items() if s == season)


def baseline_update(table: LeagueTable, match: MatchResult) -> LeagueTable:
    result = outcome_of(match)
    if result is Outcome.HOME_WIN:
        table.points[(match.season, match.home)] += 3
        table.points[(match.season, match.away)] += 0
    elif result is Outcome.AWAY_WIN:
        table.points[(match.season, match.away)] += 3
        table.points[(match.season, match.home)] += 0
    else:
        table.points[(match.season, match.home)] += 1
        table.points[(match.season, match.away)] += 1
    return table


def baseline_predict(table: LeagueTable, match: MatchResult) -> Outcome:
    """The side with strictly more current-season points wins; level means draw."""
    home = table.get(match.season, match.home)
    away = table.get(match.season, match.away)
    if home > away:
        return Outcome.HOME_WIN
    if away > home:
        return Outcome.AWAY_WIN
    return Outcome.DRAW
