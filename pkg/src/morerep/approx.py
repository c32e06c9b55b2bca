"""Monte-Carlo comparison of the exact and incremental group opinions.

A single ratee receives a stream of random opinions from fresh raters.
After every opinion the incremental ledger state is compared, by EMD, with
the exact aggregate recomputed from the whole history at that moment. The
per-index error is averaged over independently seeded repeats.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .distributions import Distribution, EvaluationSpace, emd, flat, target
from .engine import DecayParams, Opinion, ReputationLedger, group_exact

DAYS_PER_YEAR = 365
RATEE = "alpha"


@dataclass(frozen=True)
class ExperimentConfig:
    opinions_per_year: int = 10
    years: int = 6
    decay: DecayParams = DecayParams(nu=0.98, kappa=5)
    repeats: int = 20
    seed: int = 0
    space_size: int = 2
    days_per_year: int = DAYS_PER_YEAR

    def __post_init__(self) -> None:
        for name in ("opinions_per_year", "years", "repeats", "days_per_year"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.space_size < 2:
            raise ValueError("space_size must be at least 2")

    @property
    def length(self) -> int:
        return self.opinions_per_year * self.years

    @property
    def space(self) -> EvaluationSpace:
        return EvaluationSpace.of_size(self.space_size)


@dataclass
class ErrorTrace:
    mean: np.ndarray
    min: np.ndarray
    max: np.ndarray
    per_repeat: np.ndarray  # shape (repeats, length)

    def __len__(self) -> int:
        return len(self.mean)

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "mean_emd", "min_emd", "max_emd"])
        for i, (m, lo, hi) in enumerate(zip(self.mean, self.min, self.max), start=1):
            writer.writerow([i, f"{m:.9g}", f"{lo:.9g}", f"{hi:.9g}"])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def opinion_times(cfg: ExperimentConfig) -> list[int]:
    """Integer timestamps spaced evenly inside each simulated year."""
    k = cfg.opinions_per_year
    return [
        year * cfg.days_per_year + (j * cfg.days_per_year) // k
        for year in range(cfg.years)
        for j in range(k)
    ]


def random_distribution(rng: np.random.Generator, space: EvaluationSpace) -> Distribution:
    """Components drawn i.i.d. uniform on [0, 1], then normalized."""
    v = rng.uniform(size=space.size)
    while v.sum() == 0.0:
        v = rng.uniform(size=space.size)
    return Distribution(space, tuple(float(x) for x in v / v.sum()))


def gen_random_opinions(
    cfg: ExperimentConfig, rng: np.random.Generator | None = None
) -> list[Opinion]:
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    space = cfg.space
    return [
        Opinion(f"rater{i}", RATEE, t, random_distribution(rng, space))
        for i, t in enumerate(opinion_times(cfg))
    ]


def run_repeat(cfg: ExperimentConfig, rng: np.random.Generator) -> np.ndarray:
    """EMD between exact and incremental group opinions after each opinion."""
    space = cfg.space
    opinions = gen_random_opinions(cfg, rng)
    # every rater is a fresh, unrated agent
    reliability = 1.0 - emd(flat(space), target(space))
    ledger = ReputationLedger(space, cfg.decay)
    reliabilities: dict[tuple[str, int], float] = {}
    errors = np.empty(len(opinions))
    for i, op in enumerate(opinions):
        reliabilities[(op.rater, op.time)] = reliability
        ledger.update(op, reliability)
        approx = ledger.state(RATEE).dist
        exact = group_exact(opinions[: i + 1], op.time, cfg.decay, reliabilities, space)
        errors[i] = emd(exact, approx)
    return errors


def run_experiment(cfg: ExperimentConfig) -> ErrorTrace:
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.repeats)
    rows = np.vstack([run_repeat(cfg, np.random.default_rng(child)) for child in children])
    return ErrorTrace(rows.mean(axis=0), rows.min(axis=0), rows.max(axis=0), rows)


def moving_average(values: np.ndarray, window: int = 5) -> np.ndarray:
    """Trailing-edge-free moving average (``valid`` mode)."""
    return np.convolve(values, np.ones(window) / window, mode="valid")
