"""Ordered evaluation spaces and discrete probability distributions over them.

Everything here is immutable. Distributions are backed by plain tuples because
evaluation spaces are tiny (two terms for football) and the engine performs
hundreds of thousands of small updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

# Maximum deviation of sum(probs) from 1 accepted before re-normalization.
SUM_TOLERANCE = 1e-6
# Below this deviation the probabilities are stored untouched, which keeps
# serialization round-trips bit-exact.
_RENORM_THRESHOLD = 1e-12
_COMPONENT_SLACK = 1e-12


class SpaceMismatchError(ValueError):
    """Two distributions live on different evaluation spaces."""


@dataclass(frozen=True)
class EvaluationSpace:
    """An ordered set of qualitative terms, worst first, best last."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ValueError("an evaluation space needs at least two terms")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in evaluation space: {labels}")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def top(self) -> str:
        return self.labels[-1]

    @classmethod
    def of_size(cls, n: int) -> EvaluationSpace:
        """Space with generic labels ``e1 .. en``."""
        return cls(tuple(f"e{i + 1}" for i in range(n)))


BINARY = EvaluationSpace(("B", "G"))


@dataclass(frozen=True)
class Distribution:
    """Probability vector over an evaluation space.

    Construction validates the components and re-normalizes small rounding
    drift; a sum off by more than ``SUM_TOLERANCE`` is rejected.
    """

    space: EvaluationSpace
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(v) for v in self.probs)
        if len(probs) != self.space.size:
            raise ValueError(
                f"expected {self.space.size} probabilities, got {len(probs)}"
            )
        for v in probs:
            if not (-_COMPONENT_SLACK <= v <= 1.0 + _COMPONENT_SLACK):
                raise ValueError(f"probability out of [0, 1]: {v!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if abs(total - 1.0) > _RENORM_THRESHOLD or any(v < 0.0 or v > 1.0 for v in probs):
            probs = tuple(min(1.0, max(0.0, v)) for v in probs)
            total = math.fsum(probs)
            probs = tuple(v / total for v in probs)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def of(cls, space: EvaluationSpace, values: Iterable[float]) -> Distribution:
        return cls(space, tuple(values))

    def __getitem__(self, label: str) -> float:
        return self.probs[self.space.labels.index(label)]

    def __len__(self) -> int:
        return len(self.probs)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.space.labels, self.probs))


def _check_same_space(p: Distribution, q: Distribution) -> None:
    if p.space != q.space:
        raise SpaceMismatchError(
            f"distributions on different spaces: {p.space.labels} vs {q.space.labels}"
        )


def flat(space: EvaluationSpace) -> Distribution:
    """Uniform distribution, the state of total ignorance."""
    n = space.size
    return Distribution(space, (1.0 / n,) * n)


def target(space: EvaluationSpace) -> Distribution:
    """Point mass on the top term of the space."""
    n = space.size
    return Distribution(space, (0.0,) * (n - 1) + (1.0,))


def point_mass(space: EvaluationSpace, label: str) -> Distribution:
    idx = space.labels.index(label)
    return Distribution(space, tuple(1.0 if i == idx else 0.0 for i in range(space.size)))


def entropy(d: Distribution) -> float:
    """Shannon entropy in nats, with 0 * log 0 taken as 0."""
    return -math.fsum(v * math.log(v) for v in d.probs if v > 0.0)


def emd(p: Distribution, q: Distribution) -> float:
    """Earth mover's distance on the ordered space, scaled to [0, 1].

    With unit ground distance between neighbouring terms the 1-D transport
    cost is the L1 norm of the CDF difference; dividing by ``n - 1`` puts
    opposite point masses at exactly 1.
    """
    _check_same_space(p, q)
    cum = 0.0
    total = 0.0
    for pi, qi in zip(p.probs[:-1], q.probs[:-1]):
        cum += pi - qi
        total += abs(cum)
    return min(1.0, total / (p.space.size - 1))


def mix(a: float, d1: Distribution, d2: Distribution) -> Distribution:
    """Convex combination ``a * d1 + (1 - a) * d2``."""
    _check_same_space(d1, d2)
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {a!r}")
    b = 1.0 - a
    return Distribution(d1.space, tuple(a * x + b * y for x, y in zip(d1.probs, d2.probs)))


def weighted_average(
    dists: Sequence[Distribution], weights: Sequence[float]
) -> Distribution:
    """Normalized weighted sum of distributions; weights must not sum to 0."""
    if not dists:
        raise ValueError("no distributions to average")
    space = dists[0].space
    for d in dists[1:]:
        _check_same_space(dists[0], d)
    total = math.fsum(weights)
    if total == 0.0:
        raise ZeroDivisionError("weights sum to zero")
    probs = [
        math.fsum(w * d.probs[i] for d, w in zip(dists, weights)) / total
        for i in range(space.size)
    ]
    return Distribution(space, tuple(probs))
