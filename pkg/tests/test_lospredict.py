import math

import numpy as np
import pytest

from thzmac.errors import ConfigError
from thzmac.geometry import segment_intersects_rect_bruteforce
from thzmac.lospredict import (LOS_LABEL, NLOS_LABEL, PATH_COLUMNS,
                               PathRecord, SceneConfig,
                               SPEED_OF_LIGHT, aggregate,
                               aggregates_to_dataset, comparison_to_csv,
                               generate_scene, line_of_sight,
                               records_to_dataset, train_los_models)


def make_record(los=True, value=1.0):
    return PathRecord(value, value * 1e-7, 0.1, 0.2, 0.3, 0.4, 0.05, 0.6,
                      (0.0, 0.0), (value, value), los)


class TestGenerate:
    def test_no_obstacles_all_los(self):
        records, rects = generate_scene(SceneConfig(n_obstacles=0,
                                                    route_length_m=100,
                                                    seed=1))
        assert rects == []
        assert all(r.los for r in records)

    def test_record_count_is_floor(self):
        cfg = SceneConfig(n_obstacles=3, route_length_m=107.0, step_m=2.0,
                          seed=2)
        records, _ = generate_scene(cfg)
        assert len(records) == 53

    def test_blocked_when_behind_obstacle(self):
        # Obstacle wall straddling the Tx-Rx line.
        rects = [(40.0, 90.0, 60.0, 110.0)]
        assert not line_of_sight((100.0, 100.0), (10.0, 100.0), rects)
        assert line_of_sight((100.0, 100.0), (100.0, 10.0), rects)

    def test_large_obstacles_produce_nlos(self):
        cfg = SceneConfig(n_obstacles=8, obstacle_size_range=(40, 80),
                          route_length_m=600, seed=4)
        records, _ = generate_scene(cfg)
        frac_nlos = np.mean([not r.los for r in records])
        assert frac_nlos > 0.1

    def test_delay_at_least_straight_line(self):
        cfg = SceneConfig(n_obstacles=10, route_length_m=800, seed=5)
        records, _ = generate_scene(cfg)
        for r in records:
            d = math.hypot(r.rx_pos[0] - r.tx_pos[0], r.rx_pos[1] - r.tx_pos[1])
            assert r.delay_s >= d / SPEED_OF_LIGHT

    def test_los_matches_bruteforce_oracle(self):
        cfg = SceneConfig(n_obstacles=15, route_length_m=2000, seed=6)
        records, rects = generate_scene(cfg)
        for r in records:
            blocked = any(segment_intersects_rect_bruteforce(r.tx_pos, r.rx_pos,
                                                             rect)
                          for rect in rects)
            assert r.los == (not blocked)

    def test_angles_wrapped(self):
        records, _ = generate_scene(SceneConfig(n_obstacles=5,
                                                route_length_m=300, seed=7))
        for r in records:
            for angle in (r.aaod, r.eaod, r.aaoa, r.eaoa, r.dsa, r.aa):
                assert -math.pi <= angle <= math.pi

    def test_deterministic(self):
        cfg = SceneConfig(n_obstacles=6, route_length_m=200, seed=8)
        a, _ = generate_scene(cfg)
        b, _ = generate_scene(cfg)
        assert a == b

    def test_invalid_config(self):
        with pytest.raises(ConfigError):
            generate_scene(SceneConfig(route_length_m=0))
        with pytest.raises(ConfigError):
            generate_scene(SceneConfig(obstacle_size_range=(5, 1)))


class TestAggregate:
    def test_window_one_zero_spread(self):
        records = [make_record(value=v) for v in (1.0, 2.0, 3.0)]
        aggs = aggregate(records, 1)
        assert len(aggs) == 3
        assert all(all(s == 0.0 for s in a.spreads) for a in aggs)

    def test_constant_window_mean(self):
        records = [make_record(value=2.0)] * 4
        aggs = aggregate(records, 4)
        assert aggs[0].means[0] == pytest.approx(2.0)

    def test_majority_and_tie(self):
        records = [make_record(los=True)] * 3 + [make_record(los=False)] * 2
        assert aggregate(records, 5)[0].los is True
        tied = [make_record(los=True)] * 2 + [make_record(los=False)] * 2
        assert aggregate(tied, 4)[0].los is False  # ties go to NLoS

    def test_size_is_floor_of_fine(self):
        records = [make_record(value=float(i)) for i in range(17)]
        assert len(aggregate(records, 5)) == 3

    def test_dataset_roundtrip_schemas(self):
        records = [make_record(los=i % 2 == 0, value=float(i + 1))
                   for i in range(10)]
        fine = records_to_dataset(records)
        assert fine.schema == PATH_COLUMNS
        coarse = aggregates_to_dataset(aggregate(records, 2))
        assert len(coarse.schema) == 2 * len(PATH_COLUMNS)
        assert set(fine.y) <= {LOS_LABEL, NLOS_LABEL}


class TestComparison:
    def test_separable_scene_tree_accuracy(self):
        cfg = SceneConfig(n_obstacles=8, obstacle_size_range=(40, 80),
                          route_length_m=1500, noise_sigma=0.0, seed=9)
        records, _ = generate_scene(cfg)
        rows = train_los_models(records_to_dataset(records), ["dt"], seed=0)
        assert rows[0].accuracy >= 0.99

    def test_one_row_per_kind_and_ranked(self, tmp_path):
        cfg = SceneConfig(n_obstacles=10, route_length_m=800, seed=10)
        records, _ = generate_scene(cfg)
        rows = train_los_models(records_to_dataset(records),
                                ["dt", "nb", "rf"], seed=0,
                                hyper={"rf": {"n_trees": 10}})
        assert [r.kind for r in rows] != []
        assert len(rows) == 3
        accs = [r.accuracy for r in rows]
        assert accs == sorted(accs, reverse=True)
        out = tmp_path / "cmp.csv"
        comparison_to_csv(rows, out)
        lines = out.read_text().strip().split("\n")
        assert len(lines) == 4

    def test_coarse_granular_trainable(self):
        cfg = SceneConfig(n_obstacles=10, route_length_m=1200, seed=11)
        records, _ = generate_scene(cfg)
        coarse = aggregates_to_dataset(aggregate(records, 5))
        rows = train_los_models(coarse, ["dt"], seed=0)
        assert rows[0].accuracy > 0.5
