import numpy as np
import pytest

from conftest import snapshot_from_xy
from thzmac.errors import ConfigError
from thzmac.labeling import (RelativeLabel, all_labels, blockage_level_of,
                             capacity_decile_of, label_of, quadrant_of,
                             resolve_label_to_ap)
from thzmac.scoring import Assignment
from thzmac.topology import SnapshotConfig, generate_snapshot


class TestQuadrant:
    def test_northeast(self):
        snap = snapshot_from_xy([], [(1.0, 1.0)])
        assert quadrant_of(0, snap) == "NE"

    def test_theta_pi_boundary_goes_northwest(self):
        # x < 0, y = +0 within float noise: the non-negative side owns axes.
        snap = snapshot_from_xy([], [(-1.0, 0.0)])
        assert quadrant_of(0, snap) == "NW"

    def test_origin_is_northeast(self):
        snap = snapshot_from_xy([], [(0.0, 0.0)])
        assert quadrant_of(0, snap) == "NE"

    def test_half_turn_swaps_opposite_quadrants(self):
        rng = np.random.default_rng(2)
        ap_xy = rng.uniform(-40, 40, (12, 2))
        snap = snapshot_from_xy([], ap_xy)
        flipped = snapshot_from_xy([], -ap_xy)
        swap = {"NE": "SW", "SW": "NE", "NW": "SE", "SE": "NW"}
        for ap in range(12):
            assert quadrant_of(ap, flipped) == swap[quadrant_of(ap, snap)]


class TestCapacityDecile:
    def test_top_of_ten(self):
        snap = snapshot_from_xy([], [(i, 0) for i in range(10)],
                                capacities=list(range(1, 11)))
        assert capacity_decile_of(9, snap) == 9
        assert capacity_decile_of(0, snap) == 0

    def test_all_equal_collapse_to_zero(self):
        snap = snapshot_from_xy([], [(i, 0) for i in range(10)],
                                capacities=[7] * 10)
        assert all(capacity_decile_of(a, snap) == 0 for a in range(10))

    def test_twenty_aps_rank_arithmetic(self):
        snap = snapshot_from_xy([], [(i, 0) for i in range(20)],
                                capacities=list(range(20)))
        assert capacity_decile_of(0, snap) == 0
        assert capacity_decile_of(1, snap) == 0
        assert capacity_decile_of(18, snap) == 9
        assert capacity_decile_of(19, snap) == 9

    def test_distinct_capacities_fill_bins_evenly(self):
        rng = np.random.default_rng(6)
        caps = rng.permutation(np.arange(100, 140))  # 40 distinct values
        snap = snapshot_from_xy([], [(i, 0) for i in range(40)],
                                capacities=caps.tolist())
        hist = np.bincount([capacity_decile_of(a, snap) for a in range(40)],
                           minlength=10)
        assert (np.abs(hist - 4) <= 1).all()


class TestBlockageLevel:
    def test_clamp_and_identity(self):
        positions = [(0.0, 0.0)] + [(float(k + 1), 0.0) for k in range(30)]
        snap = snapshot_from_xy(positions, [(32.0, 0.0)], blocker_radius=0.5)
        assert blockage_level_of(0, 0, snap) == 8  # 30 blockers clamp to 8
        clear = snapshot_from_xy([(0, 0), (5, 40)], [(10, 0)])
        assert blockage_level_of(0, 0, clear) == 0

    def test_mid_range_identity(self):
        positions = [(0.0, 0.0), (2.0, 0.0), (4.0, 0.0), (6.0, 0.0)]
        snap = snapshot_from_xy(positions, [(8.0, 0.0)], blocker_radius=0.5)
        assert blockage_level_of(0, 0, snap) == 3


class TestLabel:
    def test_composition(self):
        snap = snapshot_from_xy([(0.5, 0.5)], [(i + 1, i + 1) for i in range(10)],
                                capacities=list(range(1, 11)))
        label = label_of(0, 5, snap)
        assert label.quadrant == "NE"
        assert label.capacity_decile == 5
        assert label.blockage_level >= 0
        assert str(label).startswith("NE-5-")

    def test_parse_print_identity_all_360(self):
        labels = all_labels()
        assert len(labels) == 360
        for label in labels:
            assert RelativeLabel.parse(str(label)) == label

    def test_bad_labels_rejected(self):
        with pytest.raises(ConfigError):
            RelativeLabel.parse("XX-0-0")
        with pytest.raises(ConfigError):
            RelativeLabel.parse("NE-11-0")
        with pytest.raises(ConfigError):
            RelativeLabel("NE", 0, 9)

    def test_pure_and_bounded(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.05, n_aps=6,
                                                n_ues=12, seed=3))
        for ue in range(snap.n_ues):
            for ap in range(snap.n_aps):
                label = label_of(ue, ap, snap)
                assert label == label_of(ue, ap, snap)
                assert 0 <= label.capacity_decile <= 9
                assert 0 <= label.blockage_level <= 8


class TestResolve:
    def test_unique_pair_resolves_to_itself(self):
        # Distinct capacities on 10 APs: every (quadrant, decile) is unique.
        snap = snapshot_from_xy([(0.1, 0.2)],
                                [(i + 1, 1) for i in range(10)],
                                capacities=[10 * (i + 1) for i in range(10)])
        for ap in range(10):
            label = label_of(0, ap, snap)
            assert resolve_label_to_ap(0, label, snap) == ap

    def test_relaxes_decile_then_quadrant(self):
        snap = snapshot_from_xy([(0.0, 0.0)], [(5, 5), (6, 6)],
                                capacities=[10, 90])
        # No AP in SW at all: falls back to the nearest-decile AP anywhere.
        label = RelativeLabel("SW", 9, 0)
        assert resolve_label_to_ap(0, label, snap) == 1
        # Quadrant populated but decile 9 empty there: nearest populated.
        label2 = RelativeLabel("NE", 9, 0)
        assert resolve_label_to_ap(0, label2, snap) == 1

    def test_tie_breaks_by_remaining_capacity(self):
        snap = snapshot_from_xy([(0.0, 0.0), (100.0, 100.0)],
                                [(5, 5), (5.000001, 5)],
                                capacities=[50, 50], demands=[30, 10])
        partial = Assignment(snap, np.array([0, -1]))
        label = RelativeLabel("NE", 0, 0)
        # AP 0 carries 30 load; AP 1 is empty and wins on remaining capacity.
        assert resolve_label_to_ap(1, label, snap, partial) == 1

    def test_total_for_any_label(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.05, n_aps=5,
                                                n_ues=4, seed=9))
        for label in all_labels():
            ap = resolve_label_to_ap(0, label, snap)
            assert 0 <= ap < snap.n_aps
