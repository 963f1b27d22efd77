import math

import numpy as np
import pytest

from moealab import (
    Counters,
    DegenerateDirectionError,
    GpsArchive,
    InsertStatus,
    ObjectiveVector,
    RaySpec,
    ray_of,
)
from oracles import oracle_front_values, random_solutions, sol


def spec_k(k=4, reference=(0.0, 0.0)):
    return RaySpec(ObjectiveVector(reference), k)


class TestRayOf:
    def test_diagonal_lands_mid_bin(self):
        assert ray_of(ObjectiveVector((1.0, 1.0)), spec_k()).coords == (2,)

    def test_axis_aligned_first_bin(self):
        assert ray_of(ObjectiveVector((1.0, 0.0)), spec_k()).coords == (0,)

    def test_vertical_clamps_into_last_bin(self):
        assert ray_of(ObjectiveVector((0.0, 1.0)), spec_k()).coords == (3,)

    def test_reference_point_is_degenerate(self):
        with pytest.raises(DegenerateDirectionError):
            ray_of(ObjectiveVector((0.0, 0.0)), spec_k())

    def test_below_reference_violates_contract(self):
        with pytest.raises(ValueError):
            ray_of(ObjectiveVector((-0.1, 1.0)), spec_k())

    def test_counts_lookups_only(self):
        counters = Counters()
        ray_of(ObjectiveVector((1.0, 1.0)), spec_k(), counters)
        assert counters.cell_lookups == 1
        assert counters.dominance_comparisons == 0

    def test_three_objectives_give_two_angular_coords(self):
        spec = RaySpec(ObjectiveVector((0.0, 0.0, 0.0)), 8)
        index = ray_of(ObjectiveVector((1.0, 1.0, 1.0)), spec)
        assert len(index.coords) == 2
        assert all(0 <= c < 8 for c in index.coords)

    def test_scale_invariance_along_a_ray(self):
        spec = spec_k(16)
        a = ray_of(ObjectiveVector((0.3, 0.7)), spec)
        b = ray_of(ObjectiveVector((0.6, 1.4)), spec)
        assert a == b


class TestGpsInsert:
    def test_vacant_ray_accepts(self):
        archive = GpsArchive(spec_k())
        outcome, feedback = archive.try_insert(sol(0, (1.0, 1.0)), Counters())
        assert outcome.status is InsertStatus.ACCEPTED_NEW
        assert feedback.crowding_hint == 0.0

    def test_closer_candidate_replaces_incumbent(self):
        archive = GpsArchive(spec_k())
        counters = Counters()
        archive.try_insert(sol(0, (1.0, 1.0)), counters)
        outcome, _ = archive.try_insert(sol(1, (0.5, 0.5)), counters)
        assert outcome.status is InsertStatus.ACCEPTED_REPLACING
        assert outcome.evicted_ids == (0,)
        assert [m.id for m in archive.members()] == [1]

    def test_same_bin_norm_comparison(self):
        # both directions fall in bin 0 of 4; the shorter vector wins
        spec = spec_k(4)
        assert ray_of(ObjectiveVector((1.0, 0.0)), spec).coords == (0,)
        assert ray_of(ObjectiveVector((0.9, 0.05)), spec).coords == (0,)
        archive = GpsArchive(spec)
        counters = Counters()
        archive.try_insert(sol(0, (1.0, 0.0)), counters)
        outcome, _ = archive.try_insert(sol(1, (0.9, 0.05)), counters)
        assert outcome.status is InsertStatus.ACCEPTED_REPLACING
        assert math.dist((0.9, 0.05), (0.0, 0.0)) < 1.0

    def test_farther_candidate_rejected(self):
        archive = GpsArchive(spec_k())
        counters = Counters()
        archive.try_insert(sol(0, (0.5, 0.5)), counters)
        outcome, _ = archive.try_insert(sol(1, (1.0, 1.0)), counters)
        assert outcome.status is InsertStatus.REJECTED

    def test_equal_norm_keeps_incumbent(self):
        archive = GpsArchive(spec_k())
        counters = Counters()
        archive.try_insert(sol(0, (1.0, 1.0)), counters)
        outcome, _ = archive.try_insert(sol(1, (1.0, 1.0)), counters)
        assert outcome.status is InsertStatus.REJECTED
        assert [m.id for m in archive.members()] == [0]

    def test_at_most_one_comparison_per_insert(self):
        archive = GpsArchive(spec_k(8))
        counters = Counters()
        rng = np.random.default_rng(2)
        for s in random_solutions(rng, 200):
            before = counters.dominance_comparisons
            archive.try_insert(s, counters)
            assert counters.dominance_comparisons - before <= 1

    def test_dominated_incumbents_are_tolerated_until_finalize(self):
        archive = GpsArchive(spec_k(8))
        counters = Counters()
        archive.try_insert(sol(0, (0.1, 0.1)), counters)  # diagonal bin 4
        archive.try_insert(sol(1, (1.0, 0.05)), counters)  # bin 0, nondominated
        archive.try_insert(sol(2, (2.0, 0.9)), counters)  # bin 2, dominated by id 0
        members = {m.objectives.values for m in archive.members()}
        assert (2.0, 0.9) in members  # dominated yet stored on its own ray
        final = {m.objectives.values for m in archive.finalize()}
        assert (2.0, 0.9) not in final


class TestGpsFinalize:
    def test_dominated_incumbent_removed(self):
        archive = GpsArchive(spec_k(4))
        counters = Counters()
        archive.try_insert(sol(0, (1.0, 1.0)), counters)
        archive.try_insert(sol(1, (2.0, 0.1)), counters)
        dominated = sol(2, (2.0, 2.0))
        # plant a dominated incumbent on an unused ray
        archive.incumbents[ray_of(ObjectiveVector((0.05, 2.0)), archive.spec)] = dominated
        final = {m.objectives.values for m in archive.finalize()}
        assert (2.0, 2.0) not in final
        assert (1.0, 1.0) in final

    def test_mutually_incomparable_incumbents_unchanged(self):
        archive = GpsArchive(spec_k(8))
        counters = Counters()
        for i, values in enumerate([(1.0, 0.1), (0.7, 0.7), (0.1, 1.0)]):
            archive.try_insert(sol(i, values), counters)
        assert {m.id for m in archive.finalize()} == {0, 1, 2}

    def test_random_stream_matches_oracle_filter_of_incumbents(self):
        rng = np.random.default_rng(7)
        archive = GpsArchive(spec_k(16))
        counters = Counters()
        for s in random_solutions(rng, 200):
            archive.try_insert(s, counters)
        incumbent_values = [m.objectives.values for m in archive.members()]
        expected = oracle_front_values(incumbent_values)
        assert {m.objectives.values for m in archive.finalize()} == expected


class TestGpsInvariants:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_per_ray_distance_never_increases(self, seed):
        rng = np.random.default_rng(seed)
        spec = spec_k(12)
        archive = GpsArchive(spec)
        counters = Counters()
        best: dict = {}
        for s in random_solutions(rng, 400):
            ray = ray_of(s.objectives, spec)
            archive.try_insert(s, counters)
            incumbent = archive.incumbents[ray]
            d = archive.distance_to_reference(incumbent)
            if ray in best:
                assert d <= best[ray] + 1e-12
            best[ray] = d
        assert archive.monotonicity_violations == 0

    def test_replacements_always_beat_the_evicted_on_distance(self):
        rng = np.random.default_rng(9)
        spec = spec_k(10)
        archive = GpsArchive(spec)
        counters = Counters()
        for s in random_solutions(rng, 500):
            before = {m.id: m for m in archive.members()}
            outcome, _ = archive.try_insert(s, counters)
            for evicted_id in outcome.evicted_ids:
                assert archive.distance_to_reference(s) < archive.distance_to_reference(
                    before[evicted_id]
                )

    def test_memory_tracks_occupied_rays(self):
        rng = np.random.default_rng(3)
        spec = spec_k(32)
        archive = GpsArchive(spec)
        counters = Counters()
        for i, s in enumerate(random_solutions(rng, 300), start=1):
            archive.try_insert(s, counters)
            assert archive.occupied_rays() == len(archive.members())
            assert archive.occupied_rays() <= min(i, 32)

    def test_locality_outcome_ignores_other_rays(self):
        # identical candidate, identical own-ray incumbent, different other
        # rays: outcomes must match exactly
        rng = np.random.default_rng(21)
        spec = spec_k(16)
        for _ in range(200):
            candidate = sol(1000, tuple(float(x) for x in rng.random(2) + 0.01))
            ray = ray_of(candidate.objectives, spec)
            a, b = GpsArchive(spec), GpsArchive(spec)
            if rng.random() < 0.7:
                incumbent_values = tuple(float(x) for x in rng.random(2) + 0.01)
                incumbent = sol(500, incumbent_values)
                incumbent_ray = ray_of(incumbent.objectives, spec)
                a.incumbents[incumbent_ray] = incumbent
                b.incumbents[incumbent_ray] = incumbent
            for archive, n_extra in ((a, 5), (b, 11)):
                added = 0
                while added < n_extra:
                    extra = sol(2000 + added, tuple(float(x) for x in rng.random(2) + 0.01))
                    extra_ray = ray_of(extra.objectives, spec)
                    if extra_ray != ray and extra_ray not in archive.incumbents:
                        archive.incumbents[extra_ray] = extra
                        added += 1
            out_a, _ = a.try_insert(candidate, Counters())
            out_b, _ = b.try_insert(candidate, Counters())
            assert out_a == out_b
