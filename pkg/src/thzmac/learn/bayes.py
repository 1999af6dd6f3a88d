"""Gaussian naive Bayes with an absolute variance floor."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from .models import Model, register_model

VARIANCE_FLOOR = 1e-9


@register_model("nb")
class GaussianNaiveBayes(Model):
    kind = "nb"

    def __init__(self, variance_floor: float = VARIANCE_FLOOR, seed: int = 0):
        if variance_floor <= 0:
            raise ConfigError("variance_floor must be positive")
        self.variance_floor = variance_floor
        self.seed = seed
        self.classes: list[str] = []
        self.log_prior: np.ndarray | None = None
        self.mean: np.ndarray | None = None
        self.var: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GaussianNaiveBayes":
        X = np.asarray(X, dtype=np.float64)
        if len(X) == 0:
            raise ConfigError("cannot train on an empty dataset")
        labels = np.asarray(list(map(str, y)), dtype=object)
        self.classes = sorted(set(labels))
        n_classes, n_features = len(self.classes), X.shape[1]
        self.mean = np.zeros((n_classes, n_features))
        self.var = np.zeros((n_classes, n_features))
        self.log_prior = np.zeros(n_classes)
        for c, name in enumerate(self.classes):
            rows = X[labels == name]
            self.mean[c] = rows.mean(axis=0)
            self.var[c] = np.maximum(rows.var(axis=0), self.variance_floor)
            self.log_prior[c] = math.log(len(rows) / len(X))
        return self

    def log_posterior(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
        out = np.empty((len(X), len(self.classes)))
        for c in range(len(self.classes)):
            diff = X - self.mean[c]
            out[:, c] = self.log_prior[c] - 0.5 * (
                np.log(2.0 * math.pi * self.var[c])
                + diff * diff / self.var[c]).sum(axis=1)
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        winners = np.argmax(self.log_posterior(X), axis=1)
        return np.asarray(self.classes, dtype=object)[winners]

    def to_dict(self) -> dict:
        return {"variance_floor": self.variance_floor, "seed": self.seed,
                "classes": self.classes,
                "log_prior": self.log_prior.tolist(),
                "mean": self.mean.tolist(), "var": self.var.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianNaiveBayes":
        model = cls(d["variance_floor"], d["seed"])
        model.classes = list(d["classes"])
        model.log_prior = np.asarray(d["log_prior"], dtype=float)
        model.mean = np.asarray(d["mean"], dtype=float)
        model.var = np.asarray(d["var"], dtype=float)
        return model
