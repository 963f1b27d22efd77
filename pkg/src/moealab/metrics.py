"""Convergence and diversity indicators, plus the empirical complexity sweep
that measures how per-insertion dominance cost scales with archive size.

Stable metric names used in stats output: "gd", "spacing", "coverage",
"cmp_slope".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats as scipy_stats

from .archives import Archive, GpsArchive, GridArchive, GridSpec, RaySpec, RnArchive
from .core import Counters, ObjectiveVector, Solution

METRIC_GD = "gd"
METRIC_SPACING = "spacing"
METRIC_COVERAGE = "coverage"
METRIC_CMP_SLOPE = "cmp_slope"

# per sweep size: the first N insertions are warm-up (excluded from the mean,
# so capacity effects dominate the measurement), then this many multiples of N
# are measured
_MEASURED_MULTIPLE = 4


def _as_matrix(front: Sequence[ObjectiveVector]) -> np.ndarray:
    return np.asarray([v.values for v in front], dtype=float)


def generational_distance(
    front: Sequence[ObjectiveVector], reference: Sequence[ObjectiveVector]
) -> float:
    """Mean Euclidean distance from each front point to its nearest reference
    point. Zero exactly when every front point lies in the reference set."""
    if not front or not reference:
        raise ValueError("generational_distance needs non-empty front and reference")
    f = _as_matrix(front)
    r = _as_matrix(reference)
    diff = f[:, None, :] - r[None, :, :]
    dists = np.sqrt((diff * diff).sum(axis=2))
    return float(dists.min(axis=1).mean())


def spacing(front: Sequence[ObjectiveVector]) -> float:
    """Standard deviation of nearest-neighbour distances within the front;
    zero for evenly spread fronts. Undefined below two points."""
    if len(front) < 2:
        raise ValueError(f"spacing needs at least 2 points, got {len(front)}")
    f = _as_matrix(front)
    diff = f[:, None, :] - f[None, :, :]
    dists = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dists, np.inf)
    nearest = dists.min(axis=1)
    return float(nearest.std())


def coverage(
    a: Sequence[ObjectiveVector], b: Sequence[ObjectiveVector]
) -> float:
    """Fraction of b weakly dominated by some member of a (weak dominance
    includes equality, so coverage(x, x) is 1)."""
    if not b:
        raise ValueError("coverage needs a non-empty second set")
    if not a:
        return 0.0
    am = _as_matrix(a)
    covered = 0
    for q in b:
        qv = np.asarray(q.values, dtype=float)
        if bool((am <= qv).all(axis=1).any()):
            covered += 1
    return covered / len(b)


@dataclass(frozen=True)
class ComplexityReport:
    """Mean dominance comparisons per insertion at each archive size, with the
    fitted log-log slope and its 95% confidence interval."""

    archiver: str
    entries: tuple[tuple[int, float], ...]
    slope: float
    slope_ci: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "archiver": self.archiver,
            "entries": [[size, mean] for size, mean in self.entries],
            METRIC_CMP_SLOPE: self.slope,
            "slope_ci": list(self.slope_ci),
        }


def _sweep_archive(kind: str, size: int) -> Archive:
    if kind == "rn":
        return RnArchive(size)
    if kind == "grid":
        spec = GridSpec(ObjectiveVector((0.0, 0.0)), ObjectiveVector((1.0, 1.0)), 32)
        return GridArchive(size, spec)
    if kind == "gps":
        return GpsArchive(RaySpec(ObjectiveVector((0.0, 0.0)), size))
    raise ValueError(f"unknown archiver kind {kind!r}")


def _incomparable_stream(rng: np.random.Generator, count: int) -> list[ObjectiveVector]:
    # points on the anti-correlated line f1 + f2 = 1: pairwise incomparable,
    # so dominance scans cannot terminate early
    ts = rng.random(count)
    return [ObjectiveVector((float(t), float(1.0 - t))) for t in ts]


def complexity_sweep(
    kind: str, sizes: Sequence[int], seed: int = 0
) -> ComplexityReport:
    """Feed a seeded incomparable-rich stream into archives of increasing size
    and fit the log-log slope of mean dominance comparisons per insertion.

    A slope near 1 means the insertion cost scales with the archive size
    (full-membership dominance scans); a slope near 0 means size-independent
    cost (single-incumbent comparisons).
    """
    if len(sizes) < 2:
        raise ValueError(f"need at least 2 sizes, got {len(sizes)}")
    ordered = sorted(int(s) for s in sizes)
    if ordered[0] < 1:
        raise ValueError("sizes must be positive")
    entries = []
    for size in ordered:
        rng = np.random.default_rng(seed)
        ids = itertools.count()
        archive = _sweep_archive(kind, size)
        counters = Counters()
        warmup = size
        measured = _MEASURED_MULTIPLE * size
        for vec in _incomparable_stream(rng, warmup):
            archive.try_insert(Solution(next(ids), (0.0,), vec), counters)
        measured_start = counters.dominance_comparisons
        for vec in _incomparable_stream(rng, measured):
            archive.try_insert(Solution(next(ids), (0.0,), vec), counters)
        mean = (counters.dominance_comparisons - measured_start) / measured
        entries.append((size, mean))
    logs_n = np.log([n for n, _ in entries])
    logs_c = np.log([max(c, 1e-12) for _, c in entries])
    fit = scipy_stats.linregress(logs_n, logs_c)
    half_width = float(
        scipy_stats.t.ppf(0.975, len(entries) - 2) * fit.stderr
    ) if len(entries) > 2 else float("inf")
    return ComplexityReport(
        archiver=kind,
        entries=tuple(entries),
        slope=float(fit.slope),
        slope_ci=(float(fit.slope) - half_width, float(fit.slope) + half_width),
    )
