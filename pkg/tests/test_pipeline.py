from dataclasses import replace

import numpy as np
import pytest

from thzmac.learn import Model
from thzmac.pipeline import (PipelineConfig, RetrainThresholds,
                             predict_association, run_offline, run_online)
from thzmac.scoring import UNASSIGNED, kpi_report
from thzmac.search import Budget
from thzmac.search.acceptors import LateAcceptance
from thzmac.topology import SnapshotConfig, generate_snapshot

DESK = SnapshotConfig(area_km2=0.1, n_aps=8, n_ues=50, seed=0)


def small_config(count=20, seed=0, **kw):
    return PipelineConfig(snapshot=DESK, snapshot_count=count,
                          solver_budget=Budget(steps=15_000),
                          acceptor=LateAcceptance(), kfold=0, seed=seed, **kw)


@pytest.fixture(scope="module")
def offline_result():
    return run_offline(small_config(count=20, seed=1))


class CountingModel(Model):
    """Wraps a model and counts predicted rows."""

    def __init__(self, inner):
        self.inner = inner
        self.kind = inner.kind
        self.classes = inner.classes
        self.rows_seen = 0

    def predict(self, X):
        self.rows_seen += len(X)
        return self.inner.predict(X)


class TestOffline:
    def test_dataset_size_is_count_times_ues(self, offline_result):
        assert len(offline_result.dataset) == 20 * 50

    def test_report_has_per_class_metrics(self, offline_result):
        report = offline_result.report
        assert 0.0 <= report.accuracy <= 1.0
        assert set(report.per_class_precision) == set(report.confusion.classes)
        assert set(report.per_class_recall) == set(report.confusion.classes)

    def test_seed_reproducible(self):
        a = run_offline(small_config(count=4, seed=5))
        b = run_offline(small_config(count=4, seed=5))
        assert np.array_equal(a.dataset.X, b.dataset.X)
        assert (a.model.predict(a.validation.X)
                == b.model.predict(b.validation.X)).all()

    def test_explicit_seeds_length_checked(self):
        with pytest.raises(Exception):
            run_offline(small_config(count=3), seeds=[1, 2])


class TestPredictAssociation:
    def test_single_ap_takes_everyone(self, offline_result):
        snap = generate_snapshot(replace(DESK, n_aps=1, n_ues=12, seed=33))
        asg = predict_association(offline_result.model, snap)
        assert (asg.ap_of == 0).all()

    def test_nearest_k_counts_inferences(self, offline_result):
        snap = generate_snapshot(replace(DESK, seed=44))
        counting = CountingModel(offline_result.model)
        predict_association(counting, snap, nearest_k=3)
        assert counting.rows_seen == snap.n_ues * 3

    def test_never_unassigned(self, offline_result):
        for seed in (7, 8, 9):
            snap = generate_snapshot(replace(DESK, seed=seed))
            asg = predict_association(offline_result.model, snap, nearest_k=3)
            assert not (asg.ap_of == UNASSIGNED).any()

    def test_training_snapshot_full_allocation(self, offline_result):
        snap, _ = offline_result.solved[0]
        asg = predict_association(offline_result.model, snap)
        assert kpi_report(snap, asg).allocated == snap.n_ues


class TestOnline:
    def test_vacuous_thresholds_never_retrain(self, offline_result):
        snaps = [generate_snapshot(replace(DESK, seed=100 + i))
                 for i in range(3)]
        result = run_online(offline_result.model, snaps,
                            RetrainThresholds(0.0, 1.0),
                            base_dataset=offline_result.dataset,
                            reference_budget=Budget(steps=4000), seed=3)
        assert not any(e.retrained for e in result.events)
        assert result.model is offline_result.model

    def test_distribution_shift_triggers_retrain(self, offline_result):
        shifted = [generate_snapshot(replace(DESK, blocker_radius=2.0,
                                             seed=200 + i))
                   for i in range(4)]
        result = run_online(offline_result.model, shifted,
                            RetrainThresholds(0.8, 0.1),
                            base_dataset=offline_result.dataset,
                            reference_budget=Budget(steps=8000), seed=4)
        assert any(e.retrained for e in result.events)

    def test_event_log_replayable(self, offline_result):
        snaps = [generate_snapshot(replace(DESK, seed=300 + i))
                 for i in range(3)]
        kw = dict(thresholds=RetrainThresholds(0.5, 0.2),
                  base_dataset=offline_result.dataset,
                  reference_budget=Budget(steps=5000), seed=9)
        a = run_online(offline_result.model, snaps, **kw)
        b = run_online(offline_result.model, snaps, **kw)
        assert [e.to_json() for e in a.events] == [e.to_json() for e in b.events]

    def test_retrained_model_used_afterwards(self, offline_result):
        # First snapshot is heavily shifted; later ones are in-distribution.
        snaps = [generate_snapshot(replace(DESK, blocker_radius=3.0, seed=400))]
        snaps += [generate_snapshot(replace(DESK, seed=401 + i))
                  for i in range(2)]
        result = run_online(offline_result.model, snaps,
                            RetrainThresholds(0.9, 1.0),
                            base_dataset=offline_result.dataset,
                            reference_budget=Budget(steps=5000), seed=11)
        assert result.events[0].retrained
        assert result.model is not offline_result.model
        assert len(result.dataset) > len(offline_result.dataset)

    def test_threshold_validation(self):
        with pytest.raises(Exception):
            RetrainThresholds(-0.1, 0.5).validate()
        with pytest.raises(Exception):
            RetrainThresholds(0.5, 1.5).validate()
