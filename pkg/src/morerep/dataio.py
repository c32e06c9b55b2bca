"""Match and opinion CSV ingestion, a synthetic league generator, and ledger
snapshots.

Dates are converted to engine timestamps with :meth:`datetime.date.toordinal`
(days since 0001-01-01), which keeps early-20th-century fixtures non-negative.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .conversion import MatchResult
from .distributions import Distribution, EvaluationSpace
from .engine import DecayParams, GroupOpinionState, Opinion, ReputationLedger
from .prediction import Outcome, outcome_of

logger = logging.getLogger(__name__)

MATCH_COLUMNS = ("date", "season", "home", "away", "home_goals", "away_goals")
MAX_REJECT_FRACTION = 0.01
SNAPSHOT_FORMAT = "morerep-ledger/1"


class DataError(ValueError):
    """Input data could not be used."""


@dataclass
class Rejection:
    line: int
    reason: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.reason}"


@dataclass
class ParseReport:
    items: list = field(default_factory=list)
    rejected: list[Rejection] = field(default_factory=list)


def date_to_timestamp(value: str | dt.date) -> int:
    if isinstance(value, str):
        value = dt.date.fromisoformat(value.strip())
    return value.toordinal()


def timestamp_to_date(t: int) -> dt.date:
    return dt.date.fromordinal(t)


def _data_lines(fh: TextIO) -> Iterable[tuple[int, str]]:
    for lineno, line in enumerate(fh, start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            yield lineno, line


def _rows(fh: TextIO) -> tuple[list[str], list[tuple[int, list[str]]]]:
    lines = list(_data_lines(fh))
    if not lines:
        return [], []
    reader = csv.reader(line for _, line in lines)
    rows = list(reader)
    header = [h.strip() for h in rows[0]]
    return header, [(lines[i][0], row) for i, row in enumerate(rows) if i > 0]


def _check_reject_rate(report: ParseReport, what: str, max_fraction: float) -> None:
    total = len(report.items) + len(report.rejected)
    if total and len(report.rejected) / total > max_fraction:
        detail = "; ".join(str(r) for r in report.rejected[:10])
        raise DataError(
            f"{len(report.rejected)} of {total} {what} rows rejected "
            f"(limit {max_fraction:.0%}): {detail}"
        )


def load_matches(
    source: str | Path | TextIO, max_reject_fraction: float = MAX_REJECT_FRACTION
) -> ParseReport:
    """Parse a match CSV; rows are sorted by date, stable within a date.

    Malformed rows are collected in ``rejected`` with their line numbers.
    More than ``max_reject_fraction`` rejects raises :class:`DataError`.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_matches(fh, max_reject_fraction)
    header, rows = _rows(source)
    if not header:
        return ParseReport()
    missing = [c for c in MATCH_COLUMNS if c not in header]
    if missing:
        raise DataError(f"match file header lacks columns: {', '.join(missing)}")
    col = {name: header.index(name) for name in MATCH_COLUMNS}
    report = ParseReport()
    for lineno, row in rows:
        try:
            if len(row) != len(header):
                raise ValueError(f"expected {len(header)} fields, got {len(row)}")
            home = row[col["home"]].strip()
            away = row[col["away"]].strip()
            if not home or not away:
                raise ValueError("empty team name")
            match = MatchResult(
                date=date_to_timestamp(row[col["date"]]),
                home=home,
                away=away,
                home_goals=int(row[col["home_goals"]]),
                away_goals=int(row[col["away_goals"]]),
                season=row[col["season"]].strip() or None,
            )
        except ValueError as exc:
            logger.warning("rejected match row at line %d: %s", lineno, exc)
            report.rejected.append(Rejection(lineno, str(exc)))
            continue
        report.items.append(match)
    _check_reject_rate(report, "match", max_reject_fraction)
    report.items.sort(key=lambda m: m.date)
    return report


def parse_matches(
    source: str | Path | TextIO, max_reject_fraction: float = MAX_REJECT_FRACTION
) -> list[MatchResult]:
    report = load_matches(source, max_reject_fraction)
    logger.info(format_summary(summarize(report.items)))
    return report.items


def summarize(matches: Sequence[MatchResult]) -> dict[str, int]:
    counts = Counter(outcome_of(m) for m in matches)
    return {
        "matches": len(matches),
        "home_wins": counts[Outcome.HOME_WIN],
        "away_wins": counts[Outcome.AWAY_WIN],
        "draws": counts[Outcome.DRAW],
    }


def format_summary(summary: dict[str, int]) -> str:
    return (
        f"{summary['matches']} matches: {summary['home_wins']} home wins, "
        f"{summary['away_wins']} away wins, {summary['draws']} draws"
    )


def write_matches(matches: Iterable[MatchResult], fh: TextIO, comment: str | None = None) -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(MATCH_COLUMNS)
    for m in matches:
        writer.writerow(
            [
                timestamp_to_date(m.date).isoformat(),
                m.season or "",
                m.home,
                m.away,
                m.home_goals,
                m.away_goals,
            ]
        )


def _parse_time(value: str) -> int:
    value = value.strip()
    if value.lstrip("-").isdigit():
        t = int(value)
        if t < 0:
            raise ValueError(f"negative time {t}")
        return t
    return date_to_timestamp(value)


def load_opinions(
    source: str | Path | TextIO, max_reject_fraction: float = 1.0
) -> tuple[EvaluationSpace | None, ParseReport]:
    """Parse an opinion CSV: ``time,rater,ratee,<label_1>,...,<label_n>``.

    The label columns define the evaluation space, worst term first.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_opinions(fh, max_reject_fraction)
    header, rows = _rows(source)
    if not header:
        return None, ParseReport()
    if header[:3] != ["time", "rater", "ratee"] or len(header) < 5:
        raise DataError(
            "opinion header must be time,rater,ratee followed by at least two labels"
        )
    space = EvaluationSpace(tuple(header[3:]))
    report = ParseReport()
    for lineno, row in rows:
        try:
            if len(row) != len(header):
                raise ValueError(f"expected {len(header)} fields, got {len(row)}")
            values = [float(v) for v in row[3:]]
            if not all(math.isfinite(v) for v in values):
                raise ValueError("non-finite probability")
            op = Opinion(
                row[1].strip(), row[2].strip(), _parse_time(row[0]), Distribution(space, values)
            )
        except (ValueError, TypeError) as exc:
            logger.warning("rejected opinion row at line %d: %s", lineno, exc)
            report.rejected.append(Rejection(lineno, str(exc)))
            continue
        report.items.append(op)
    _check_reject_rate(report, "opinion", max_reject_fraction)
    report.items.sort(key=lambda o: o.time)
    return space, report


def parse_opinions(source: str | Path | TextIO) -> list[Opinion]:
    return load_opinions(source)[1].items


def write_opinions(opinions: Iterable[Opinion], space: EvaluationSpace, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["time", "rater", "ratee", *space.labels])
    for op in opinions:
        writer.writerow([op.time, op.rater, op.ratee, *(repr(v) for v in op.value.probs)])


# -- synthetic league -------------------------------------------------------

GENERATOR_LAW = (
    "synthetic double round-robin league; latent strength s ~ Normal(0, 0.2) per team, "
    "random walk Normal(0, 0.05) between seasons; "
    "home goals ~ Poisson(1.5 * exp(s_home - s_away)), "
    "away goals ~ Poisson(1.0 * exp(s_away - s_home))"
)
# Roughly 49% home wins, 24% draws, 2.6 goals per match.
_HOME_RATE = 1.5
_AWAY_RATE = 1.0
_STRENGTH_SD = 0.2
_SEASON_DRIFT_SD = 0.05
_FIRST_SEASON = 2000


def round_robin(n_teams: int) -> list[list[tuple[int, int]]]:
    """Double round-robin rounds by the circle method, home/away mirrored."""
    teams = list(range(n_teams))
    if n_teams % 2:
        teams.append(-1)
    n = len(teams)
    first_leg: list[list[tuple[int, int]]] = []
    for rnd in range(n - 1):
        pairs = []
        for i in range(n // 2):
            a, b = teams[i], teams[n - 1 - i]
            if a < 0 or b < 0:
                continue
            pairs.append((a, b) if (rnd + i) % 2 == 0 else (b, a))
        first_leg.append(pairs)
        teams = [teams[0], teams[-1], *teams[1:-1]]
    second_leg = [[(b, a) for a, b in rnd] for rnd in first_leg]
    return first_leg + second_leg


def team_name(i: int) -> str:
    return f"Team{i + 1:02d}"


def gen_synthetic(
    teams: int, seasons: int, seed: int, return_strengths: bool = False
) -> list[MatchResult] | tuple[list[MatchResult], np.ndarray]:
    """Seeded synthetic league of ``seasons`` double round-robins.

    With ``return_strengths`` the per-season latent strengths (shape
    ``(seasons, teams)``) are returned as well.
    """
    if teams < 2:
        raise ValueError("need at least two teams")
    if seasons < 0:
        raise ValueError("seasons must be non-negative")
    strength_rng, goals_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2)
    )
    strength = strength_rng.normal(0.0, _STRENGTH_SD, size=teams)
    history = np.empty((seasons, teams))
    schedule = round_robin(teams)
    matches: list[MatchResult] = []
    for s in range(seasons):
        if s:
            strength = strength + strength_rng.normal(0.0, _SEASON_DRIFT_SD, size=teams)
        history[s] = strength
        year = _FIRST_SEASON + s
        label = f"{year}-{(year + 1) % 100:02d}"
        start = dt.date(year, 8, 20)
        for rnd, pairs in enumerate(schedule):
            day = date_to_timestamp(start + dt.timedelta(days=7 * rnd))
            for h, a in pairs:
                diff = strength[h] - strength[a]
                hg = int(goals_rng.poisson(_HOME_RATE * math.exp(diff)))
                ag = int(goals_rng.poisson(_AWAY_RATE * math.exp(-diff)))
                matches.append(MatchResult(day, team_name(h), team_name(a), hg, ag, label))
    if return_strengths:
        return matches, history
    return matches


# -- ledger snapshots -------------------------------------------------------


def ledger_to_dict(ledger: ReputationLedger) -> dict:
    agents = sorted(ledger.states.values(), key=lambda st: str(st.agent))
    return {
        "format": SNAPSHOT_FORMAT,
        "space": list(ledger.space.labels),
        "params": {"nu": ledger.params.nu, "kappa": ledger.params.kappa},
        "agents": [
            {
                "agent": st.agent,
                "probs": list(st.dist.probs),
                "count": st.count,
                "last_update": st.last_update,
            }
            for st in agents
        ],
    }


def ledger_from_dict(doc: dict) -> ReputationLedger:
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise DataError(f"unknown snapshot format {doc.get('format')!r}")
    space = EvaluationSpace(tuple(doc["space"]))
    ledger = ReputationLedger(space, DecayParams(**doc["params"]))
    for entry in doc["agents"]:
        agent = entry["agent"]
        ledger.states[agent] = GroupOpinionState(
            agent,
            Distribution(space, entry["probs"]),
            int(entry["count"]),
            int(entry["last_update"]),
        )
    return ledger


def dump_ledger(ledger: ReputationLedger) -> str:
    return json.dumps(ledger_to_dict(ledger), indent=2) + "\n"


def save_ledger(ledger: ReputationLedger, path: str | Path) -> None:
    Path(path).write_text(dump_ledger(ledger), encoding="utf-8")


def load_ledger(path: str | Path) -> ReputationLedger:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not a ledger snapshot ({exc})") from exc
    return ledger_from_dict(doc)
