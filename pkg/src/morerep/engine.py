"""Opinion aggregation engine: decay, reliability review, certainty weighting,
exact and incremental group opinions, and reputation.

Time is an integer count of engine units (days by default). A
:class:`ReputationLedger` holds one :class:`GroupOpinionState` per agent and is
updated strictly in time order; every update costs O(1) regardless of how many
opinions have been seen. :func:`group_exact` recomputes the aggregate from the
full opinion history and serves as the reference the incremental path is
checked against.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .distributions import (
    Distribution,
    EvaluationSpace,
    SpaceMismatchError,
    emd,
    entropy,
    flat,
    mix,
    target,
    weighted_average,
)

logger = logging.getLogger(__name__)

AgentId = Hashable

# Aggregation weights at or below this are treated as "no information".
WEIGHT_EPS = 1e-12


class TimeOrderError(ValueError):
    """An update or query refers to a time before the state it touches."""


@dataclass(frozen=True)
class DecayParams:
    """Decay rate ``nu`` in [0, 1] and grace period / pace ``kappa`` > 0."""

    nu: float = 0.6
    kappa: float = 365.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.nu <= 1.0:
            raise ValueError(f"decay rate nu must lie in [0, 1], got {self.nu!r}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")

    def exponent(self, elapsed: float) -> float:
        """Decay exponent for ``elapsed`` time units (0 inside the grace period)."""
        if elapsed < self.kappa:
            return 0.0
        return 1.0 + elapsed / self.kappa


@dataclass(frozen=True)
class Opinion:
    """Distribution-valued assessment of ``ratee`` by ``rater`` at ``time``."""

    rater: AgentId
    ratee: AgentId
    time: int
    value: Distribution

    def __post_init__(self) -> None:
        if self.rater == self.ratee:
            raise ValueError(f"agent {self.rater!r} cannot rate itself")
        if self.time < 0:
            raise ValueError(f"negative timestamp {self.time!r}")
        if not isinstance(self.value, Distribution):
            raise TypeError("opinion value must be a Distribution")


@dataclass(frozen=True)
class GroupOpinionState:
    agent: AgentId
    dist: Distribution
    count: int = 0
    last_update: int = 0


def decay(d: Distribution, t_from: float, t_to: float, p: DecayParams) -> Distribution:
    """Drift ``d`` towards the flat distribution over ``t_to - t_from`` units."""
    if t_to < t_from:
        raise TimeOrderError(f"cannot decay backwards from t={t_from} to t={t_to}")
    exp = p.exponent(t_to - t_from)
    if exp == 0.0:
        return d
    return mix(p.nu**exp, d, flat(d.space))


def certainty(d: Distribution) -> float:
    """Information value of ``d``: ``H(flat) - H(d)``, zero for flat, ``ln n`` for a point mass."""
    return max(0.0, math.log(d.space.size) - entropy(d))


def review(o: Distribution, reliability: float) -> Distribution:
    """Blend an opinion towards flat in proportion to the rater's unreliability."""
    if not 0.0 <= reliability <= 1.0:
        raise ValueError(f"reliability must lie in [0, 1], got {reliability!r}")
    return mix(reliability, o, flat(o.space))


def reputation_of(dist: Distribution) -> float:
    """One minus the distance from ``dist`` to the ideal (target) distribution."""
    return 1.0 - emd(dist, target(dist.space))


class ReputationLedger:
    """Per-agent running group opinions for one parameter configuration.

    Agents are created lazily in the flat, zero-count state. The ledger is
    single-writer; :meth:`snapshot` gives an independent copy for readers.
    """

    def __init__(
        self,
        space: EvaluationSpace,
        params: DecayParams | None = None,
        certainty_fn: Callable[[Distribution], float] = certainty,
    ) -> None:
        self.space = space
        self.params = params if params is not None else DecayParams()
        self.certainty_fn = certainty_fn
        self._flat = flat(space)
        self._target = target(space)
        self.states: dict[AgentId, GroupOpinionState] = {}

    def __contains__(self, agent: AgentId) -> bool:
        return agent in self.states

    def __len__(self) -> int:
        return len(self.states)

    def state(self, agent: AgentId) -> GroupOpinionState:
        st = self.states.get(agent)
        if st is None:
            return GroupOpinionState(agent, self._flat, 0, 0)
        return st

    def group_opinion(self, agent: AgentId, t: int) -> Distribution:
        """The agent's group opinion decayed to time ``t``."""
        st = self.states.get(agent)
        if st is None:
            return self._flat
        if t < st.last_update:
            raise TimeOrderError(
                f"query for {agent!r} at t={t} precedes its last update at t={st.last_update}"
            )
        return decay(st.dist, st.last_update, t, self.params)

    def reputation(self, agent: AgentId, t: int) -> float:
        return 1.0 - emd(self.group_opinion(agent, t), self._target)

    def update(self, op: Opinion, reliability: float | None = None) -> float:
        """Fold one opinion into the ratee's group opinion.

        The rater's reliability is its reputation at ``op.time`` unless given
        explicitly. Returns the ratee's reputation after the update.
        """
        if op.value.space != self.space:
            raise SpaceMismatchError(
                f"opinion on space {op.value.space.labels}, ledger uses {self.space.labels}"
            )
        if reliability is None:
            reliability = self.reputation(op.rater, op.time)
        reviewed = review(op.value, reliability)

        decayed = self.group_opinion(op.ratee, op.time)
        st = self.state(op.ratee)
        w_opinion = self.certainty_fn(reviewed)
        if abs(w_opinion) <= WEIGHT_EPS:
            # contentless opinion: only the decay is recorded
            new = GroupOpinionState(op.ratee, decayed, st.count, op.time)
        else:
            w_group = st.count * self.certainty_fn(decayed)
            dist = weighted_average((decayed, reviewed), (w_group, w_opinion))
            new = GroupOpinionState(op.ratee, dist, st.count + 1, op.time)
        self.states[op.ratee] = new
        return 1.0 - emd(new.dist, self._target)

    def update_simultaneous(self, ops: Sequence[Opinion]) -> list[float]:
        """Apply opinions sharing a timestamp with reliabilities read beforehand.

        Used for the mutual opinions of a match, so that the order in which
        the two directions are applied does not matter.
        """
        rels = [self.reputation(op.rater, op.time) for op in ops]
        return [self.update(op, r) for op, r in zip(ops, rels)]

    def snapshot(self) -> ReputationLedger:
        copy = ReputationLedger(self.space, self.params, self.certainty_fn)
        copy.states = dict(self.states)
        return copy

    def reputations(self, t: int) -> dict[AgentId, float]:
        return {agent: self.reputation(agent, t) for agent in self.states}


def reputation(ledger: ReputationLedger, agent: AgentId, t: int) -> float:
    """Reputation of ``agent`` at time ``t``; unknown agents score as flat."""
    return ledger.reputation(agent, t)


def group_update(ledger: ReputationLedger, op: Opinion) -> ReputationLedger:
    """Incremental (O(1)) group-opinion update for the ratee of ``op``."""
    ledger.update(op)
    return ledger


def group_exact(
    opinions: Iterable[Opinion],
    t: int,
    p: DecayParams,
    reliabilities: Mapping[tuple[AgentId, int], float],
    space: EvaluationSpace | None = None,
    certainty_fn: Callable[[Distribution], float] = certainty,
) -> Distribution:
    """Certainty-weighted average of every reviewed, decayed opinion at ``t``.

    Costs O(len(opinions)) per call. ``reliabilities`` maps ``(rater, time)``
    to the reliability used to review that opinion. Returns the flat
    distribution when there is nothing to aggregate.
    """
    dists: list[Distribution] = []
    weights: list[float] = []
    for op in opinions:
        if op.time > t:
            raise TimeOrderError(f"opinion at t={op.time} is later than query time t={t}")
        space = op.value.space
        reviewed = review(op.value, reliabilities[(op.rater, op.time)])
        d = decay(reviewed, op.time, t, p)
        w = certainty_fn(d)
        if abs(w) > WEIGHT_EPS:
            dists.append(d)
            weights.append(w)
    if space is None:
        raise ValueError("space is required when there are no opinions")
    if not dists or math.fsum(weights) == 0.0:
        return flat(space)
    return weighted_average(dists, weights)


@dataclass
class ODBResult:
    ledger: ReputationLedger
    trace: list[tuple[int, AgentId, float]] = field(default_factory=list)
    rejected: list[tuple[int, str]] = field(default_factory=list)


def process_odb(
    opinions: Iterable[object],
    space: EvaluationSpace,
    params: DecayParams | None = None,
    ledger: ReputationLedger | None = None,
) -> ODBResult:
    """Run the opinion database through a ledger in ascending time order.

    Equal timestamps keep their input order. Records that are not valid
    opinions on ``space`` are rejected with a diagnostic and skipped. The
    trace holds ``(time, ratee, reputation)`` after each applied opinion.
    """
    if ledger is None:
        ledger = ReputationLedger(space, params)
    result = ODBResult(ledger)
    valid: list[tuple[int, Opinion]] = []
    for idx, op in enumerate(opinions):
        if not isinstance(op, Opinion):
            reason = f"not an Opinion: {type(op).__name__}"
        elif op.value.space != space:
            reason = f"evaluation space {op.value.space.labels} != {space.labels}"
        else:
            valid.append((idx, op))
            continue
        logger.warning("rejected opinion record %d: %s", idx, reason)
        result.rejected.append((idx, reason))

    valid.sort(key=lambda item: item[1].time)
    for idx, op in valid:
        try:
            rep = ledger.update(op)
        except TimeOrderError as exc:
            logger.warning("rejected opinion record %d: %s", idx, exc)
            result.rejected.append((idx, str(exc)))
            continue
        result.trace.append((op.time, op.ratee, rep))
    return result
