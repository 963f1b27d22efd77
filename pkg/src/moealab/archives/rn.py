"""Ranking/niching archiver: global dominance first, clustering truncation second.

Dominated candidates never enter; overflow beyond capacity is resolved by
average-linkage clustering in objective space, keeping one representative per
cluster. This family exhibits fitness deterioration: truncation can evict a
point that dominates a later-retained one (see the deterioration tests).
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ..core import (
    Counters,
    DominanceRelation,
    Solution,
    compare,
)
from .base import Archive, FeedbackSignal, InsertOutcome, outcome_from_transition


class RnArchive(Archive):
    """Bounded nondominated store with clustering-based crowding control."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._members: list[Solution] = []
        self.evicted_log: list[Solution] = []

    def members(self) -> list[Solution]:
        return list(self._members)

    def try_insert(
        self, candidate: Solution, counters: Counters
    ) -> tuple[InsertOutcome, FeedbackSignal]:
        before = list(self._members)
        start = counters.dominance_comparisons
        kept: list[Solution] = []
        beaten: list[Solution] = []
        rejected = False
        for m in self._members:
            rel = compare(candidate.objectives, m.objectives, counters)
            if rel is DominanceRelation.DOMINATED_BY or rel is DominanceRelation.EQUAL:
                rejected = True
                break
            if rel is DominanceRelation.DOMINATES:
                beaten.append(m)
            else:
                kept.append(m)
        hint = self._crowding_hint(candidate, before)
        if not rejected:
            self.evicted_log.extend(beaten)
            self._members = kept + [candidate]
            if len(self._members) > self.capacity:
                self.cluster_truncate(self.capacity)
        used = counters.dominance_comparisons - start
        outcome = outcome_from_transition(before, self._members, candidate, used)
        return outcome, FeedbackSignal(outcome.accepted, hint, len(self._members))

    def _crowding_hint(self, candidate: Solution, members: list[Solution]) -> float:
        # 1/(1+d_nn): bounded, higher means a denser neighbourhood
        if not members:
            return 0.0
        nearest = min(
            candidate.objectives.distance_to(m.objectives) for m in members
        )
        return 1.0 / (1.0 + nearest)

    def cluster_truncate(self, target: int) -> list[Solution]:
        """Agglomerate (average linkage, Euclidean in objective space) until
        exactly `target` clusters remain, then keep one member per cluster.

        Representative: the member with minimal mean distance to its cluster
        mates (a singleton keeps itself). All ties break toward the lower
        solution id, including the choice of which pair merges first, so runs
        are bit-reproducible.
        """
        if target < 1:
            raise ValueError(f"target must be >= 1, got {target}")
        n = len(self._members)
        if n <= target:
            return []
        objs = np.array([m.objectives.values for m in self._members], dtype=float)
        diff = objs[:, None, :] - objs[None, :, :]
        point_dist = np.sqrt((diff * diff).sum(axis=2))

        clusters: list[list[int]] = [[i] for i in range(n)]
        idkeys: list[int] = [self._members[i].id for i in range(n)]
        dist: list[list[float]] = [list(map(float, row)) for row in point_dist]

        while len(clusters) > target:
            best_key = None
            best_pair = (0, 1)
            for i in range(len(clusters)):
                row = dist[i]
                for j in range(i + 1, len(clusters)):
                    lo, hi = (
                        (idkeys[i], idkeys[j])
                        if idkeys[i] < idkeys[j]
                        else (idkeys[j], idkeys[i])
                    )
                    key = (row[j], lo, hi)
                    if best_key is None or key < best_key:
                        best_key = key
                        best_pair = (i, j)
            i, j = best_pair
            ni, nj = len(clusters[i]), len(clusters[j])
            # Lance-Williams update keeps dist[] equal to the mean pairwise
            # inter-cluster distance (average linkage).
            merged_row = [
                (ni * dist[i][k] + nj * dist[j][k]) / (ni + nj)
                for k in range(len(clusters))
            ]
            clusters[i] = clusters[i] + clusters[j]
            idkeys[i] = min(idkeys[i], idkeys[j])
            for k in range(len(clusters)):
                dist[i][k] = merged_row[k]
                dist[k][i] = merged_row[k]
            dist[i][i] = 0.0
            del clusters[j], idkeys[j], dist[j]
            for row in dist:
                del row[j]

        keep: set[int] = set()
        for cluster in clusters:
            if len(cluster) == 1:
                keep.add(cluster[0])
                continue
            best = None
            for i in cluster:
                mean = sum(point_dist[i][j] for j in cluster if j != i) / (
                    len(cluster) - 1
                )
                key = (mean, self._members[i].id)
                if best is None or key < best[0]:
                    best = (key, i)
            keep.add(best[1])

        evicted = [m for k, m in enumerate(self._members) if k not in keep]
        self._members = [m for k, m in enumerate(self._members) if k in keep]
        self.evicted_log.extend(evicted)
        return evicted

    def strength_fitness(
        self, population: Iterable[Solution], counters: Counters | None = None
    ) -> dict[int, float]:
        """Strength-based fitness over archive members and population, lower is better.

        Each archive member e gets strength S(e) = |{p in population weakly
        dominated by e}| / (|population| + 1) and fitness S(e). A population
        member's fitness is 1 plus the summed strength of the archive members
        that strictly dominate it, so anything nondominated by the whole
        archive scores exactly 1.
        """
        pop = list(population)
        denom = len(pop) + 1
        fitness: dict[int, float] = {}
        strengths: dict[int, float] = {}
        relations: list[list[DominanceRelation]] = []
        for e in self._members:
            rels = [compare(e.objectives, p.objectives, counters) for p in pop]
            relations.append(rels)
            covered = sum(
                1
                for rel in rels
                if rel is DominanceRelation.DOMINATES or rel is DominanceRelation.EQUAL
            )
            strengths[e.id] = covered / denom
            fitness[e.id] = strengths[e.id]
        for k, p in enumerate(pop):
            total = 1.0
            for e, rels in zip(self._members, relations):
                if rels[k] is DominanceRelation.DOMINATES:
                    total += strengths[e.id]
            fitness[p.id] = total
        return fitness
