"""Turn football scores into pairs of mutual opinions on the {B, G} space.

Three strategies: ``naive`` looks only at the winner, ``mv`` (margin of
victory) uses the share of goals, ``gmv`` (gifted margin of victory) adds a
bonus of ``x`` goals to both sides before taking shares, optionally rescaled
to [0, 1] with bounds taken from a match corpus.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Hashable, Iterable

from .distributions import BINARY, Distribution
from .engine import Opinion

logger = logging.getLogger(__name__)


class Strategy(str, Enum):
    NAIVE = "naive"
    MV = "mv"
    GMV = "gmv"


@dataclass(frozen=True)
class MatchResult:
    date: int
    home: Hashable
    away: Hashable
    home_goals: int
    away_goals: int
    season: str | None = None

    def __post_init__(self) -> None:
        if self.home == self.away:
            raise ValueError(f"team {self.home!r} cannot play itself")
        for goals in (self.home_goals, self.away_goals):
            if isinstance(goals, bool) or not isinstance(goals, int) or goals < 0:
                raise ValueError(f"goal counts must be non-negative integers, got {goals!r}")
        if self.date < 0:
            raise ValueError(f"negative match date {self.date!r}")

    @property
    def margin(self) -> int:
        return self.home_goals - self.away_goals


@dataclass(frozen=True)
class ConversionConfig:
    strategy: Strategy = Strategy.GMV
    x: float = 1.0
    normalize: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.strategy is Strategy.GMV and not self.x > 0:
            raise ValueError(f"GMV gift x must be positive, got {self.x!r}")


@dataclass(frozen=True)
class NormBounds:
    """Lowest (``m``) and highest (``M``) GMV good-probabilities over a corpus."""

    m: float
    M: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.m <= self.M <= 1.0:
            raise ValueError(f"invalid bounds m={self.m!r}, M={self.M!r}")


def _good(p_good: float) -> Distribution:
    return Distribution(BINARY, (1.0 - p_good, p_good))


def _pair(match: MatchResult, home_good: float, away_good: float) -> tuple[Opinion, Opinion]:
    about_home = Opinion(match.away, match.home, match.date, _good(home_good))
    about_away = Opinion(match.home, match.away, match.date, _good(away_good))
    return about_home, about_away


def convert_naive(match: MatchResult) -> tuple[Opinion, Opinion]:
    """Winner gets {B:0, G:1}, loser {B:1, G:0}; a draw gives both {0.5, 0.5}."""
    if match.home_goals > match.away_goals:
        return _pair(match, 1.0, 0.0)
    if match.home_goals < match.away_goals:
        return _pair(match, 0.0, 1.0)
    return _pair(match, 0.5, 0.5)


def convert_mv(match: MatchResult) -> tuple[Opinion, Opinion]:
    """Each side's good-probability is its share of the goals (0-0 gives 0.5)."""
    total = match.home_goals + match.away_goals
    if total == 0:
        return _pair(match, 0.5, 0.5)
    return _pair(match, match.home_goals / total, match.away_goals / total)


def gmv_good(goals_for: int, goals_against: int, x: float) -> float:
    """Un-normalized GMV good-probability for the side scoring ``goals_for``."""
    return (goals_for + x) / (goals_for + goals_against + 2.0 * x)


def gmv_normalize(p_good: float, bounds: NormBounds) -> float:
    """Rescale ``p_good`` affinely so that ``m -> 0`` and ``M -> 1``.

    Degenerate bounds (``M == m``) carry no spread and give 0.5. Values
    outside ``[m, M]`` are clamped with a warning.
    """
    if bounds.M == bounds.m:
        return 0.5
    if p_good < bounds.m or p_good > bounds.M:
        logger.warning(
            "GMV probability %r outside bounds [%r, %r]; clamping", p_good, bounds.m, bounds.M
        )
        p_good = min(bounds.M, max(bounds.m, p_good))
    return (p_good - bounds.m) / (bounds.M - bounds.m)


def convert_gmv(
    match: MatchResult,
    cfg: ConversionConfig = ConversionConfig(),
    bounds: NormBounds | None = None,
) -> tuple[Opinion, Opinion]:
    """Gifted margin of victory.

    The side scoring more goals gets the larger good-probability,
    ``(goals_for + x) / (total + 2x)``. When ``bounds`` is given the
    probabilities are rescaled with :func:`gmv_normalize`.
    """
    if not cfg.x > 0:
        raise ValueError(f"GMV gift x must be positive, got {cfg.x!r}")
    home = gmv_good(match.home_goals, match.away_goals, cfg.x)
    away = gmv_good(match.away_goals, match.home_goals, cfg.x)
    if bounds is not None:
        home = gmv_normalize(home, bounds)
        away = gmv_normalize(away, bounds)
    return _pair(match, home, away)


def compute_norm_bounds(matches: Iterable[MatchResult], cfg: ConversionConfig) -> NormBounds:
    """Min and max GMV good-probabilities over both directions of every match."""
    probs: list[float] = []
    for match in matches:
        probs.append(gmv_good(match.home_goals, match.away_goals, cfg.x))
        probs.append(gmv_good(match.away_goals, match.home_goals, cfg.x))
    if not probs:
        raise ValueError("cannot compute normalization bounds from an empty corpus")
    return NormBounds(min(probs), max(probs))


def convert(
    match: MatchResult, cfg: ConversionConfig, bounds: NormBounds | None = None
) -> tuple[Opinion, Opinion]:
    """Dispatch on ``cfg.strategy``; returns ``(about_home, about_away)``."""
    if cfg.strategy is Strategy.NAIVE:
        return convert_naive(match)
    if cfg.strategy is Strategy.MV:
        return convert_mv(match)
    return convert_gmv(match, cfg, bounds if cfg.normalize else None)
