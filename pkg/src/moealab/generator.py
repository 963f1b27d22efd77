"""Candidate production: parent selection over population and archive,
real-coded variation, and an optional dominance-driven local search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Counters, DominanceRelation, Solution, compare
from .problems import ProblemSpec, evaluate


@dataclass(frozen=True)
class VariationConfig:
    """Knobs for the crossover/mutation pipeline.

    mutation_prob of None resolves to 1/n per gene at generation time; the
    spreads are the usual distribution indices (higher = children closer to
    their parents).
    """

    crossover_prob: float = 0.9
    crossover_spread: float = 15.0
    mutation_prob: float | None = None
    mutation_spread: float = 20.0
    archive_parent_prob: float = 0.5

    def __post_init__(self):
        for name in ("crossover_prob", "archive_parent_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError(f"mutation_prob must be in [0, 1], got {self.mutation_prob}")
        if self.crossover_spread <= 0 or self.mutation_spread <= 0:
            raise ValueError("distribution indices must be positive")


@dataclass(frozen=True)
class LocalSearchConfig:
    enabled: bool = False
    steps: int = 0
    step_scale: float = 0.05

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.step_scale <= 0:
            raise ValueError(f"step_scale must be > 0, got {self.step_scale}")


def select_parents(
    population: Sequence[Solution],
    archive_members: Sequence[Solution],
    rng: np.random.Generator,
    archive_parent_prob: float,
    fitness_by_id: dict[int, float] | None = None,
    feedback=None,
) -> tuple[Solution, Solution]:
    """Draw two parents, each independently from the archive with probability
    archive_parent_prob (uniformly), otherwise from the population.

    Population draws use a binary tournament on fitness_by_id (lower wins,
    ties to the lower id) when a fitness map is supplied, uniform choice
    otherwise. The feedback argument is a hook for feedback-aware selection
    strategies; the default selection does not condition on it.
    """
    if not population:
        raise ValueError("population must be non-empty")

    def one() -> Solution:
        if archive_members and rng.random() < archive_parent_prob:
            return archive_members[int(rng.integers(len(archive_members)))]
        if fitness_by_id is None:
            return population[int(rng.integers(len(population)))]
        i = int(rng.integers(len(population)))
        j = int(rng.integers(len(population)))
        a, b = population[i], population[j]
        ka = (fitness_by_id[a.id], a.id)
        kb = (fitness_by_id[b.id], b.id)
        return a if ka <= kb else b

    return one(), one()


def generate(
    parents: tuple[Solution, Solution],
    config: VariationConfig,
    bounds: Sequence[tuple[float, float]],
    rng: np.random.Generator,
    ids: Iterator[int],
) -> Solution:
    """Produce an unevaluated child: per-gene simulated-binary crossover, then
    per-gene polynomial mutation, clamped to bounds.

    Identical (rng state, parents, config) always yields an identical child.
    """
    p1, p2 = parents
    n = len(p1.genome)
    mutation_prob = config.mutation_prob if config.mutation_prob is not None else 1.0 / n
    eta_c = config.crossover_spread
    eta_m = config.mutation_spread
    genome = []
    for k in range(n):
        lo, hi = bounds[k]
        x1, x2 = p1.genome[k], p2.genome[k]
        if rng.random() < config.crossover_prob:
            u = rng.random()
            if u <= 0.5:
                beta = (2.0 * u) ** (1.0 / (eta_c + 1.0))
            else:
                beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0))
            c1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2)
            c2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2)
            g = c1 if rng.random() < 0.5 else c2
        else:
            g = x1
        if hi > lo and rng.random() < mutation_prob:
            g = _polynomial_mutation(g, lo, hi, eta_m, rng)
        genome.append(min(hi, max(lo, g)))
    return Solution(next(ids), tuple(genome))


def _polynomial_mutation(
    x: float, lo: float, hi: float, eta: float, rng: np.random.Generator
) -> float:
    span = hi - lo
    delta_l = (x - lo) / span
    delta_r = (hi - x) / span
    u = rng.random()
    if u < 0.5:
        xy = 1.0 - delta_l
        val = 2.0 * u + (1.0 - 2.0 * u) * xy ** (eta + 1.0)
        delta_q = val ** (1.0 / (eta + 1.0)) - 1.0
    else:
        xy = 1.0 - delta_r
        val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy ** (eta + 1.0)
        delta_q = 1.0 - val ** (1.0 / (eta + 1.0))
    return x + delta_q * span


def local_search(
    seed_solution: Solution,
    problem: ProblemSpec,
    config: LocalSearchConfig,
    rng: np.random.Generator,
    ids: Iterator[int],
    counters: Counters,
    max_evaluations: int | None = None,
) -> Solution:
    """Up to `steps` single-coordinate perturbations of magnitude at most
    step_scale times the variable range; a move is kept only when its
    objectives strictly dominate the current ones.

    The returned solution is therefore never dominated by the seed. Every
    trial costs one evaluation, capped by max_evaluations when given.
    """
    if not config.enabled or config.steps <= 0:
        return seed_solution
    current = seed_solution
    n = len(seed_solution.genome)
    for _ in range(config.steps):
        if max_evaluations is not None and counters.evaluations >= max_evaluations:
            break
        k = int(rng.integers(n))
        lo, hi = problem.bounds[k]
        genes = list(current.genome)
        step = (2.0 * rng.random() - 1.0) * config.step_scale * (hi - lo)
        genes[k] = min(hi, max(lo, genes[k] + step))
        genome = tuple(genes)
        counters.evaluations += 1
        objs = evaluate(problem, genome)
        if compare(objs, current.objectives, counters) is DominanceRelation.DOMINATES:
            current = Solution(next(ids), genome, objs)
    return current
