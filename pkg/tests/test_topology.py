import math

import numpy as np
import pytest

from conftest import snapshot_from_xy
from thzmac.errors import ConfigError, InvariantError
from thzmac.topology import (Snapshot, SnapshotConfig, blockage_pair_stats,
                             blocker_count, blocker_count_direct,
                             generate_snapshot, initial_clustering,
                             search_space_log10)


class TestGenerate:
    def test_disk_radius_one_km2(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=1.0, n_aps=1,
                                                n_ues=0, seed=0))
        assert snap.disk_radius == pytest.approx(564.19, abs=0.01)

    def test_paper_scale_counts(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=1.0, n_aps=125,
                                                n_ues=741, seed=1))
        assert snap.n_ues == 741
        assert snap.n_aps == 125

    def test_same_seed_byte_identical(self):
        cfg = SnapshotConfig(area_km2=0.05, n_aps=5, n_ues=20, seed=99)
        assert generate_snapshot(cfg).to_json() == generate_snapshot(cfg).to_json()

    def test_positions_inside_disk_and_ranges(self):
        cfg = SnapshotConfig(area_km2=0.1, n_aps=10, n_ues=50, seed=3,
                             capacity_range=(50, 150), demand_range=(5, 20))
        snap = generate_snapshot(cfg)
        for ap in snap.aps:
            assert ap.pos.r <= snap.disk_radius
            assert 50 <= ap.capacity_rr <= 150
        for ue in snap.ues:
            assert ue.pos.r <= snap.disk_radius
            assert 5 <= ue.demand_rr <= 20

    def test_radial_uniformity(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=1.0, n_aps=1,
                                                n_ues=100_000, seed=7))
        mean_r = np.mean([u.pos.r for u in snap.ues])
        expected = 2.0 / 3.0 * snap.disk_radius
        assert abs(mean_r - expected) <= 0.01 * expected

    def test_poisson_mode_draws_counts(self):
        cfg = SnapshotConfig(area_km2=0.1, n_aps=10, n_ues=50, seed=3,
                             poisson=True)
        snap = generate_snapshot(cfg)
        assert snap.n_aps >= 1
        assert snap.to_json() == generate_snapshot(cfg).to_json()

    def test_invalid_configs_rejected(self):
        with pytest.raises(ConfigError):
            generate_snapshot(SnapshotConfig(area_km2=0.0, seed=0))
        with pytest.raises(ConfigError):
            generate_snapshot(SnapshotConfig(n_aps=0, seed=0))
        with pytest.raises(ConfigError):
            generate_snapshot(SnapshotConfig(capacity_range=(10, 5), seed=0))


class TestBlockerCount:
    def test_empty_corridor(self):
        snap = snapshot_from_xy([(0, 0), (5, 50)], [(10, 0)], blocker_radius=1.0)
        assert blocker_count(snap, 0, 0) == 0

    def test_midpoint_blocker(self):
        snap = snapshot_from_xy([(0, 0), (5, 0)], [(10, 0)], blocker_radius=0.5)
        assert blocker_count(snap, 0, 0) == 1

    def test_three_on_segment(self):
        snap = snapshot_from_xy([(0, 0), (2.5, 0), (5.0, 0), (7.5, 0)],
                                [(10, 0)], blocker_radius=0.25)
        assert blocker_count(snap, 0, 0) == 3

    def test_zero_radius_blocks_nothing(self):
        snap = snapshot_from_xy([(0, 0), (5, 0)], [(10, 0)], blocker_radius=0.0)
        assert blocker_count(snap, 0, 0) == 0

    def test_monotone_in_radius(self):
        rng = np.random.default_rng(5)
        ue_xy = rng.uniform(-50, 50, (20, 2))
        ap_xy = rng.uniform(-50, 50, (4, 2))
        counts = []
        for radius in (0.0, 0.5, 2.0, 8.0):
            snap = snapshot_from_xy(ue_xy, ap_xy, blocker_radius=radius)
            counts.append(snap.blocker_matrix().copy())
        for lo, hi in zip(counts, counts[1:]):
            assert (hi >= lo).all()

    def test_rotation_invariant(self):
        rng = np.random.default_rng(8)
        ue_xy = rng.uniform(-40, 40, (15, 2))
        ap_xy = rng.uniform(-40, 40, (3, 2))
        base = snapshot_from_xy(ue_xy, ap_xy, blocker_radius=2.0)
        phi = 1.234
        rot = np.array([[math.cos(phi), -math.sin(phi)],
                        [math.sin(phi), math.cos(phi)]])
        rotated = snapshot_from_xy(ue_xy @ rot.T, ap_xy @ rot.T,
                                   blocker_radius=2.0)
        assert np.array_equal(base.blocker_matrix(), rotated.blocker_matrix())

    def test_other_ue_order_irrelevant(self):
        ue_xy = [(0, 0), (3, 0.1), (6, -0.1), (9, 0.2)]
        snap = snapshot_from_xy(ue_xy, [(12, 0)], blocker_radius=1.0)
        permuted = snapshot_from_xy([ue_xy[0], ue_xy[3], ue_xy[1], ue_xy[2]],
                                    [(12, 0)], blocker_radius=1.0)
        assert blocker_count(snap, 0, 0) == blocker_count(permuted, 0, 0)

    def test_matrix_matches_direct_recomputation(self):
        rng = np.random.default_rng(3)
        snap = snapshot_from_xy(rng.uniform(-30, 30, (12, 2)),
                                rng.uniform(-30, 30, (4, 2)),
                                blocker_radius=3.0)
        for ue in range(12):
            for ap in range(4):
                assert blocker_count(snap, ue, ap) == \
                    blocker_count_direct(snap, ue, ap)

    def test_unknown_ids(self):
        snap = snapshot_from_xy([(0, 0)], [(1, 0)])
        with pytest.raises(ConfigError):
            blocker_count(snap, 5, 0)
        with pytest.raises(ConfigError):
            blocker_count(snap, 0, 2)


class TestClustering:
    def test_single_ap(self):
        snap = snapshot_from_xy([(1, 1), (2, 2), (-3, 0)], [(0, 0)])
        assert initial_clustering(snap) == {0: 0, 1: 0, 2: 0}

    def test_separated_clusters(self):
        snap = snapshot_from_xy([(100, 0), (101, 1), (-100, 0), (-99, -1)],
                                [(100, 0), (-100, 0)])
        clusters = initial_clustering(snap)
        assert clusters[0] == 0 and clusters[1] == 0
        assert clusters[2] == 1 and clusters[3] == 1

    def test_deterministic(self):
        cfg = SnapshotConfig(area_km2=0.1, n_aps=6, n_ues=30, seed=21)
        a = generate_snapshot(cfg).cluster_of
        b = generate_snapshot(cfg).cluster_of
        assert a == b


class TestScale:
    def test_paper_search_space(self):
        assert search_space_log10(125, 741) == pytest.approx(1553.81, abs=0.01)

    def test_trivial_values(self):
        assert search_space_log10(7, 0) == 0.0
        assert search_space_log10(10, 3) == pytest.approx(3.0)

    def test_pair_stats_single_ue(self):
        snap = snapshot_from_xy([(0, 0)], [(1, 0), (2, 0)])
        assert blockage_pair_stats(snap)["fracPairsBlocked"] == 0.0

    def test_pair_stats_collinear(self):
        snap = snapshot_from_xy([(10, 0), (5, 0)], [(0, 0)], blocker_radius=0.5)
        stats = blockage_pair_stats(snap)
        assert stats["fracPairsBlocked"] == pytest.approx(0.5)
        assert stats["avgBlockersPerPair"] == pytest.approx(0.5)

    def test_pair_stats_zero_radius(self):
        snap = snapshot_from_xy([(10, 0), (5, 0)], [(0, 0)], blocker_radius=0.0)
        assert blockage_pair_stats(snap)["fracPairsBlocked"] == 0.0


class TestSerialization:
    def test_round_trip(self, desk_snapshot):
        clone = Snapshot.from_json(desk_snapshot.to_json())
        assert clone == desk_snapshot

    def test_malformed_document(self):
        with pytest.raises(InvariantError):
            Snapshot.from_json('{"meta": {}}')

    def test_duplicate_ids_rejected(self):
        doc = ('{"meta": {"seed": 0, "areaKm2": 1.0, "blockerRadius": 1.0},'
               '"aps": [{"id": 0, "r": 1, "theta": 0, "capacity": 5},'
               '{"id": 0, "r": 2, "theta": 0, "capacity": 5}],'
               '"ues": [], "clusters": {}}')
        with pytest.raises(InvariantError):
            Snapshot.from_json(doc)
