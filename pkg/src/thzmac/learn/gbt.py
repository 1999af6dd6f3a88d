"""Gradient boosted trees: one-vs-rest logistic boosting with softmax readout.

Each round fits one depth-limited regression tree per class to the logistic
residual y_c - sigmoid(F_c); leaf values take a Newton step. Prediction is
the argmax of the per-class additive scores after softmax normalization.
The one-vs-rest structure keeps a single binary machinery working for
anything up to the full 360-label space.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .models import Model, register_model
from .tree import RegressionTree


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


@register_model("gbt")
class GradientBoostedTrees(Model):
    kind = "gbt"

    def __init__(self, n_rounds: int = 100, learning_rate: float = 0.1,
                 max_depth: int = 4, min_samples_leaf: int = 1, seed: int = 0):
        if n_rounds < 1:
            raise ConfigError("n_rounds must be >= 1")
        if learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.classes: list[str] = []
        self.base_score: list[float] = []
        self.trees: list[list[RegressionTree]] = []  # [round][class]

    def fit(self, X: np.ndarray, y: np.ndarray) -> "GradientBoostedTrees":
        X = np.asarray(X, dtype=np.float64)
        if len(X) == 0:
            raise ConfigError("cannot train on an empty dataset")
        self.classes = sorted(set(map(str, y)))
        n, n_classes = len(X), len(self.classes)
        class_index = {c: i for i, c in enumerate(self.classes)}
        y_onehot = np.zeros((n, n_classes), dtype=np.float64)
        for i, label in enumerate(map(str, y)):
            y_onehot[i, class_index[label]] = 1.0

        # Start each class at the log-odds of its prior.
        prior = y_onehot.mean(axis=0).clip(1e-6, 1 - 1e-6)
        self.base_score = list(np.log(prior / (1.0 - prior)))
        scores = np.tile(self.base_score, (n, 1))

        self.trees = []
        for _ in range(self.n_rounds):
            round_trees: list[RegressionTree] = []
            for c in range(n_classes):
                p = _sigmoid(scores[:, c])
                grad = y_onehot[:, c] - p
                hess = p * (1.0 - p)
                tree = RegressionTree(self.max_depth, self.min_samples_leaf)
                tree.fit(X, grad, hess)
                scores[:, c] += self.learning_rate * tree.predict(X)
                round_trees.append(tree)
            self.trees.append(round_trees)
        return self

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
        scores = np.tile(self.base_score, (len(X), 1))
        for round_trees in self.trees:
            for c, tree in enumerate(round_trees):
                scores[:, c] += self.learning_rate * tree.predict(X)
        return scores

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(X)
        z = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def predict(self, X: np.ndarray) -> np.ndarray:
        winners = np.argmax(self.decision_scores(X), axis=1)
        return np.asarray(self.classes, dtype=object)[winners]

    def to_dict(self) -> dict:
        return {"n_rounds": self.n_rounds, "learning_rate": self.learning_rate,
                "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf, "seed": self.seed,
                "classes": self.classes, "base_score": list(self.base_score),
                "trees": [[t.to_dict() for t in row] for row in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "GradientBoostedTrees":
        model = cls(d["n_rounds"], d["learning_rate"], d["max_depth"],
                    d["min_samples_leaf"], d["seed"])
        model.classes = list(d["classes"])
        model.base_score = list(d["base_score"])
        model.trees = [[RegressionTree.from_dict(t) for t in row]
                       for row in d["trees"]]
        return model
