"""The uniform archive contract every archiver implements.

An archive is a bounded elitist store. Insertion reports exactly how the
membership changed (outcome) and what the neighbourhood looked like
(feedback), so the engine can stay archiver-agnostic.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ..core import Counters, Solution, nondominated_filter


class InsertStatus(Enum):
    ACCEPTED_NEW = "accepted_new"
    ACCEPTED_REPLACING = "accepted_replacing"
    REJECTED = "rejected"


@dataclass(frozen=True)
class InsertOutcome:
    """Result of one insertion attempt.

    evicted_ids lists only solutions that were members before the call; a
    candidate that is accepted and immediately truncated away nets out to
    REJECTED with no evictions reported.
    """

    status: InsertStatus
    evicted_ids: tuple[int, ...] = ()
    dominance_comparisons_used: int = 0

    @property
    def accepted(self) -> bool:
        return self.status is not InsertStatus.REJECTED


@dataclass(frozen=True)
class FeedbackSignal:
    """Archive feedback routed to both the generator and the population update.

    crowding_hint is a nonnegative density estimate near the candidate on an
    archiver-defined scale; archive_size is the member count after the attempt.
    """

    accepted: bool
    crowding_hint: float
    archive_size: int


class Archive(ABC):
    """One archive instance is confined to a single run's engine thread."""

    evicted_log: list[Solution]

    @abstractmethod
    def try_insert(
        self, candidate: Solution, counters: Counters
    ) -> tuple[InsertOutcome, FeedbackSignal]:
        """Offer a candidate; membership changes exactly as the outcome reports."""

    @abstractmethod
    def members(self) -> list[Solution]:
        """Snapshot of current members; callers own the returned list."""

    def finalize(self) -> list[Solution]:
        """Pareto filter of the members, applied after the run terminates.

        Identity on membership for stores that only ever hold nondominated
        points; removes the tolerated dominated incumbents otherwise.
        """
        return nondominated_filter(self.members())


def outcome_from_transition(
    before: Sequence[Solution],
    after: Sequence[Solution],
    candidate: Solution,
    comparisons_used: int,
) -> InsertOutcome:
    """Derive the outcome from the membership change, so outcome and state
    agree by construction."""
    after_ids = {s.id for s in after}
    evicted = tuple(s.id for s in before if s.id not in after_ids)
    if candidate.id not in after_ids:
        assert not evicted, "a rejected insertion must not change membership"
        return InsertOutcome(InsertStatus.REJECTED, (), comparisons_used)
    if evicted:
        return InsertOutcome(InsertStatus.ACCEPTED_REPLACING, evicted, comparisons_used)
    return InsertOutcome(InsertStatus.ACCEPTED_NEW, (), comparisons_used)
