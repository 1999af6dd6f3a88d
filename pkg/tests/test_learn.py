import numpy as np
import pytest

from conftest import snapshot_from_xy
from thzmac.errors import ConfigError
from thzmac.labeling import label_of
from thzmac.learn import (ConfusionMatrix, Dataset, FEATURE_NAMES,
                          build_training_set, evaluate, featurize,
                          kfold_accuracy, load_model, metrics_from_confusion,
                          predict_latency_bench, save_model, stratified_split,
                          train_classifier)
from thzmac.scoring import Assignment
from thzmac.search import Budget, solve
from thzmac.topology import SnapshotConfig, blocker_count, generate_snapshot


def toy_dataset(n=200, seed=0, separable=True):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 3))
    if separable:
        y = np.where(X[:, 0] > 0.5, "hi", "lo")
    else:
        y = np.where(rng.random(n) > 0.5, "hi", "lo")
    return Dataset(("a", "b", "c"), X, list(y))


def xor_dataset(n=600, seed=1):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 2))
    labels = []
    for x, y in X:
        if (x > 0.5) == (y > 0.5):
            labels.append("diag")
        elif x > 0.5:
            labels.append("east")
        else:
            labels.append("west")
    return Dataset(("x", "y"), X, labels)


class TestFeaturize:
    def test_zero_distance_at_same_point(self):
        snap = snapshot_from_xy([(0, 0)], [(0, 0)])
        row = featurize(0, 0, snap)
        assert row[FEATURE_NAMES.index("distance")] == 0.0

    def test_angle_features_on_unit_circle(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.05, n_aps=4,
                                                n_ues=10, seed=2))
        for ue in range(snap.n_ues):
            row = featurize(ue, 0, snap)
            s = row[FEATURE_NAMES.index("ue_theta_sin")]
            c = row[FEATURE_NAMES.index("ue_theta_cos")]
            assert s * s + c * c == pytest.approx(1.0)

    def test_blocker_feature_matches_topology(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.02, n_aps=5,
                                                n_ues=20, seed=4))
        rng = np.random.default_rng(0)
        idx = FEATURE_NAMES.index("blockers")
        for _ in range(100):
            ue = int(rng.integers(snap.n_ues))
            ap = int(rng.integers(snap.n_aps))
            assert featurize(ue, ap, snap)[idx] == blocker_count(snap, ue, ap)


class TestBuildTrainingSet:
    def test_one_row_per_assigned_ue(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.05, n_aps=5,
                                                n_ues=50, seed=6))
        res = solve(snap, Assignment.from_clustering(snap),
                    budget=Budget(steps=5000), seed=0)
        ds = build_training_set([(snap, res.best)])
        assert len(ds) == 50

    def test_empty_input(self):
        assert len(build_training_set([])) == 0

    def test_labels_reproduce_label_of(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=0.05, n_aps=5,
                                                n_ues=25, seed=8))
        asg = Assignment.from_clustering(snap)
        ds = build_training_set([(snap, asg)])
        for ue in range(snap.n_ues):
            expected = str(label_of(ue, int(asg.ap_of[ue]), snap))
            assert ds.y[ue] == expected


class TestStratifiedSplit:
    def test_largest_remainder_60_40(self):
        X = np.zeros((100, 1))
        y = ["a"] * 60 + ["b"] * 40
        train, val = stratified_split(Dataset(("f",), X, y), 0.95, seed=0)
        assert len(val) == 5
        counts = val.class_counts()
        assert counts == {"a": 3, "b": 2}

    def test_full_train_fraction(self):
        ds = toy_dataset(50)
        train, val = stratified_split(ds, 1.0, seed=0)
        assert len(val) == 0 and len(train) == 50

    def test_union_and_disjoint(self):
        ds = toy_dataset(137, seed=3)
        train, val = stratified_split(ds, 0.8, seed=1)
        assert len(train) + len(val) == len(ds)
        seen = {tuple(r) for r in train.X} | {tuple(r) for r in val.X}
        assert len(seen) == len(ds)  # rows are unique random floats

    def test_singleton_class_stays_in_train(self):
        X = np.arange(22, dtype=float).reshape(-1, 1)
        y = ["common"] * 21 + ["rare"]
        train, val = stratified_split(Dataset(("f",), X, y), 0.5, seed=0)
        assert "rare" in train.y
        assert "rare" not in val.y


class TestClassifiers:
    def test_separable_tree_is_perfect(self):
        ds = toy_dataset(300, separable=True)
        model = train_classifier("dt", ds, seed=0)
        assert evaluate(model, ds).accuracy == 1.0

    def test_duplicate_rows_do_not_break_bayes(self):
        X = np.ones((30, 4))
        y = ["a"] * 15 + ["b"] * 15
        model = train_classifier("nb", Dataset(("w", "x", "y", "z"), X, y), seed=0)
        assert len(model.predict(X)) == 30  # no division by zero

    def test_gbt_beats_bayes_on_xor(self):
        ds = xor_dataset()
        gbt = train_classifier("gbt", ds, hyper={"n_rounds": 25}, seed=0)
        nb = train_classifier("nb", ds, seed=0)
        assert evaluate(gbt, ds).accuracy > evaluate(nb, ds).accuracy

    def test_single_class_constant_model(self):
        X = np.random.default_rng(0).random((10, 2))
        ds = Dataset(("a", "b"), X, ["only"] * 10)
        for kind in ("dt", "rf", "gbt", "nb"):
            model = train_classifier(kind, ds, hyper={"n_rounds": 2}
                                     if kind == "gbt" else None, seed=0)
            assert set(model.predict(X)) == {"only"}

    def test_empty_training_set_rejected(self):
        ds = Dataset(("a",), np.zeros((0, 1)), [])
        with pytest.raises(ConfigError):
            train_classifier("dt", ds, seed=0)

    def test_unique_features_reach_full_training_accuracy(self):
        rng = np.random.default_rng(5)
        X = rng.random((120, 2))
        y = [f"c{i % 17}" for i in range(120)]
        model = train_classifier("dt", Dataset(("a", "b"), X, y),
                                 hyper={"max_depth": 64,
                                        "min_samples_leaf": 1}, seed=0)
        assert evaluate(model, Dataset(("a", "b"), X, y)).accuracy == 1.0

    def test_depth_monotone_training_accuracy(self):
        ds = xor_dataset(400, seed=7)
        last = 0.0
        for depth in (1, 2, 4, 8, 16):
            model = train_classifier("dt", ds, hyper={"max_depth": depth},
                                     seed=0)
            acc = evaluate(model, ds).accuracy
            assert acc >= last - 1e-12
            last = acc

    def test_forest_and_gbt_deterministic(self):
        ds = xor_dataset(300, seed=9)
        for kind, hyper in (("rf", {"n_trees": 15}), ("gbt", {"n_rounds": 8})):
            a = train_classifier(kind, ds, hyper=hyper, seed=3)
            b = train_classifier(kind, ds, hyper=hyper, seed=3)
            assert (a.predict(ds.X) == b.predict(ds.X)).all()

    def test_model_io_round_trip(self, tmp_path):
        ds = xor_dataset(200, seed=11)
        for kind, hyper in (("dt", None), ("rf", {"n_trees": 5}),
                            ("gbt", {"n_rounds": 4}), ("nb", None)):
            model = train_classifier(kind, ds, hyper=hyper, seed=1)
            path = tmp_path / f"{kind}.json"
            save_model(model, path)
            clone = load_model(path)
            assert (model.predict(ds.X) == clone.predict(ds.X)).all()


class TestMetrics:
    def test_reference_binary_counts(self):
        # Predicted-by-actual counts: [[TP, FP], [FN, TN]].
        cm = ConfusionMatrix(("LoS", "NLoS"),
                             np.array([[3072, 55], [5673, 14076]]))
        accuracy, precision, recall = metrics_from_confusion(cm)
        assert accuracy == pytest.approx(0.7496, abs=1e-4)
        assert precision["LoS"] == pytest.approx(0.9824, abs=1e-4)
        assert recall["NLoS"] == pytest.approx(0.9961, abs=1e-4)

    def test_perfect_predictor_identity(self):
        ds = toy_dataset(100, separable=True)
        model = train_classifier("dt", ds, seed=0)
        report = evaluate(model, ds)
        assert report.accuracy == 1.0
        off_diag = report.confusion.counts.sum() - \
            np.trace(report.confusion.counts)
        assert off_diag == 0

    def test_confusion_identities(self):
        ds = xor_dataset(300, seed=13)
        model = train_classifier("nb", ds, seed=0)
        report = evaluate(model, ds)
        cm = report.confusion
        assert cm.total == len(ds)
        weighted = sum(report.per_class_precision[c] * cm.predicted_totals()[i]
                       for i, c in enumerate(cm.classes))
        assert weighted / cm.total == pytest.approx(report.accuracy)

    def test_kfold_reports_std(self):
        ds = toy_dataset(100, separable=True)
        mean, std, accs = kfold_accuracy("dt", ds, k=5, seed=0)
        assert len(accs) == 5
        assert 0.9 <= mean <= 1.0
        assert std >= 0.0


class TestLatency:
    def test_nearest_k_cheaper_than_all_aps(self):
        snap = generate_snapshot(SnapshotConfig(area_km2=1.0, n_aps=125,
                                                n_ues=50, seed=1))
        res = solve(snap, Assignment.from_clustering(snap),
                    budget=Budget(steps=2000), seed=0)
        ds = build_training_set([(snap, res.best)])
        model = train_classifier("dt", ds, seed=0)
        bench = predict_latency_bench(model, snap, repetitions=30)
        assert bench["msPerDataPoint"] > 0
        assert bench["msPerUENearestK"] < bench["msPerUEAllAPs"]
