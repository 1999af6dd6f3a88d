"""Bagged forest of Gini trees with per-split feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from .models import Model, register_model
from .tree import DecisionTree


@register_model("rf")
class RandomForest(Model):
    """Bootstrap-aggregated CART trees; each split considers sqrt(F)
    features. Ties in the class vote resolve to the first class in sorted
    order. Deterministic per seed."""

    kind = "rf"

    def __init__(self, n_trees: int = 100, max_depth: int = 12,
                 min_samples_leaf: int = 2, seed: int = 0):
        if n_trees < 1:
            raise ConfigError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.classes: list[str] = []
        self.trees: list[DecisionTree] = []

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForest":
        X = np.asarray(X, dtype=np.float64)
        if len(X) == 0:
            raise ConfigError("cannot train on an empty dataset")
        self.classes = sorted(set(map(str, y)))
        y = np.asarray(list(map(str, y)), dtype=object)
        n, n_features = X.shape
        max_features = max(1, int(round(math.sqrt(n_features))))
        seeds = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        self.trees = []
        for tree_seq in seeds:
            rng = np.random.default_rng(tree_seq)
            boot = rng.integers(0, n, size=n)
            tree = DecisionTree(self.max_depth, self.min_samples_leaf,
                                max_features=max_features,
                                seed=int(tree_seq.generate_state(2)[1]))
            tree.fit(X[boot], y[boot], classes=self.classes)
            self.trees.append(tree)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
        votes = np.zeros((len(X), len(self.classes)), dtype=np.int64)
        for tree in self.trees:
            idx = tree.predict_indices(X)
            votes[np.arange(len(X)), idx] += 1
        winners = np.argmax(votes, axis=1)
        return np.asarray(self.classes, dtype=object)[winners]

    def to_dict(self) -> dict:
        return {"n_trees": self.n_trees, "max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf, "seed": self.seed,
                "classes": self.classes,
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d: dict) -> "RandomForest":
        model = cls(d["n_trees"], d["max_depth"], d["min_samples_leaf"],
                    d["seed"])
        model.classes = list(d["classes"])
        model.trees = [DecisionTree.from_dict(t) for t in d["trees"]]
        return model
