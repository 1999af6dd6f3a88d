"""Confusion matrices and evaluation metrics.

Counts are indexed [predicted][actual]. Precision of class c is its diagonal
over the predicted row; recall is the diagonal over the actual column; both
are 0 when the denominator is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigError
from .data import Dataset
from .models import Model, train_classifier


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: np.ndarray  # [predicted][actual], int64

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.classes), len(self.classes)):
            raise ConfigError("confusion counts must be square over classes")
        if (counts < 0).any():
            raise ConfigError("confusion counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_labels(cls, predicted: Sequence[str], actual: Sequence[str],
                    classes: Sequence[str] | None = None) -> "ConfusionMatrix":
        if len(predicted) != len(actual):
            raise ConfigError("predicted/actual label counts differ")
        if classes is None:
            classes = sorted(set(predicted) | set(actual))
        index = {c: i for i, c in enumerate(classes)}
        counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
        for p, a in zip(predicted, actual):
            counts[index[p], index[a]] += 1
        return cls(tuple(classes), counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def predicted_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def actual_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def metrics_from_confusion(cm: ConfusionMatrix) -> tuple[float, dict, dict]:
    """(accuracy, per-class precision, per-class recall) from raw counts."""
    diag = np.diag(cm.counts).astype(float)
    total = cm.total
    accuracy = float(diag.sum() / total) if total else 0.0
    pred_totals = cm.predicted_totals()
    act_totals = cm.actual_totals()
    precision = {c: float(diag[i] / pred_totals[i]) if pred_totals[i] else 0.0
                 for i, c in enumerate(cm.classes)}
    recall = {c: float(diag[i] / act_totals[i]) if act_totals[i] else 0.0
              for i, c in enumerate(cm.classes)}
    return accuracy, precision, recall


@dataclass
class EvalReport:
    accuracy: float
    per_class_precision: dict[str, float]
    per_class_recall: dict[str, float]
    confusion: ConfusionMatrix
    std_dev_over_folds: float | None = None

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "perClassPrecision": self.per_class_precision,
            "perClassRecall": self.per_class_recall,
            "confusion": {"classes": list(self.confusion.classes),
                          "counts": self.confusion.counts.tolist()},
            "stdDevOverFolds": self.std_dev_over_folds,
        }


def evaluate(model: Model, dataset: Dataset) -> EvalReport:
    predicted = [str(p) for p in model.predict(dataset.X)]
    actual = [str(a) for a in dataset.y]
    classes = sorted(set(predicted) | set(actual))
    cm = ConfusionMatrix.from_labels(predicted, actual, classes)
    accuracy, precision, recall = metrics_from_confusion(cm)
    return EvalReport(accuracy, precision, recall, cm)


def kfold_accuracy(kind: str, dataset: Dataset, k: int = 10, seed: int = 0,
                   hyper: dict | None = None) -> tuple[float, float, list[float]]:
    """Mean and sample standard deviation of accuracy over k shuffled folds."""
    if k < 2:
        raise ConfigError("k-fold needs k >= 2")
    n = len(dataset)
    if n < k:
        raise ConfigError(f"dataset of {n} rows cannot form {k} folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    folds = [order[i::k] for i in range(k)]
    accs = []
    for i in range(k):
        test_idx = np.sort(folds[i])
        train_idx = np.sort(np.concatenate([folds[j] for j in range(k) if j != i]))
        model = train_classifier(kind, dataset.subset(train_idx),
                                 hyper=hyper, seed=seed)
        accs.append(evaluate(model, dataset.subset(test_idx)).accuracy)
    mean = float(np.mean(accs))
    std = float(np.std(accs, ddof=1))
    return mean, std, accs
