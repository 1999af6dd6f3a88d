"""CART trees: Gini classification and squared-error regression.

Numeric splits are the midpoints between sorted unique feature values;
candidate features are scanned in index order and only a strictly better
impurity wins, so training is deterministic (the optional per-split feature
subsample draws from a seeded generator). Trees are stored as flat arrays,
which keeps prediction vectorized and serialization trivial.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .models import Model, register_model

_EPS = 1e-12


class _TreeArrays:
    """Flat node storage; feature == -1 marks a leaf."""

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def add_node(self) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def freeze(self) -> None:
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold, dtype=np.float64)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value, dtype=np.float64)

    def leaf_indices(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = np.nonzero(feat >= 0)[0]
            if len(active) == 0:
                return node
            cur = node[active]
            go_left = X[active, feat[active]] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])

    def to_lists(self) -> dict:
        return {"feature": np.asarray(self.feature).tolist(),
                "threshold": np.asarray(self.threshold).tolist(),
                "left": np.asarray(self.left).tolist(),
                "right": np.asarray(self.right).tolist(),
                "value": np.asarray(self.value).tolist()}

    @classmethod
    def from_lists(cls, d: dict) -> "_TreeArrays":
        t = cls()
        t.feature = d["feature"]
        t.threshold = d["threshold"]
        t.left = d["left"]
        t.right = d["right"]
        t.value = d["value"]
        t.freeze()
        return t


def _candidate_features(n_features: int, max_features: int | None,
                        rng: np.random.Generator | None) -> np.ndarray:
    if max_features is None or max_features >= n_features or rng is None:
        return np.arange(n_features)
    picked = rng.choice(n_features, size=max_features, replace=False)
    return np.sort(picked)


def _best_split_gini(X, y_idx, n_classes, features, min_leaf):
    """Returns (feature, threshold, score) maximizing sum(count_c^2)/n over
    the two children, or None. Higher score = lower weighted Gini."""
    n = len(y_idx)
    best = None
    best_score = -np.inf
    for f in features:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y_idx[order]
        cut = np.nonzero(xs[1:] > xs[:-1])[0]  # split after position i
        if len(cut) == 0:
            continue
        onehot = np.zeros((n, n_classes), dtype=np.float64)
        onehot[np.arange(n), ys] = 1.0
        cum = np.cumsum(onehot, axis=0)
        total = cum[-1]
        left_n = cut + 1.0
        right_n = n - left_n
        valid = (left_n >= min_leaf) & (right_n >= min_leaf)
        if not valid.any():
            continue
        cl = cum[cut]
        cr = total[None, :] - cl
        score = (cl * cl).sum(axis=1) / left_n + (cr * cr).sum(axis=1) / right_n
        score[~valid] = -np.inf
        pos = int(np.argmax(score))
        if score[pos] > best_score + _EPS:
            best_score = float(score[pos])
            i = cut[pos]
            thr = (xs[i] + xs[i + 1]) / 2.0
            if thr >= xs[i + 1]:
                thr = xs[i]
            best = (int(f), float(thr), best_score)
    return best


def _best_split_mse(X, target, features, min_leaf):
    """Maximize sum_L^2/n_L + sum_R^2/n_R (equivalently minimize SSE)."""
    n = len(target)
    best = None
    best_score = -np.inf
    for f in features:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ts = target[order]
        cut = np.nonzero(xs[1:] > xs[:-1])[0]
        if len(cut) == 0:
            continue
        cum = np.cumsum(ts)
        total = cum[-1]
        left_n = cut + 1.0
        right_n = n - left_n
        valid = (left_n >= min_leaf) & (right_n >= min_leaf)
        if not valid.any():
            continue
        sl = cum[cut]
        sr = total - sl
        score = sl * sl / left_n + sr * sr / right_n
        score[~valid] = -np.inf
        pos = int(np.argmax(score))
        if score[pos] > best_score + _EPS:
            best_score = float(score[pos])
            i = cut[pos]
            thr = (xs[i] + xs[i + 1]) / 2.0
            if thr >= xs[i + 1]:
                thr = xs[i]
            best = (int(f), float(thr), best_score)
    return best


@register_model("dt")
class DecisionTree(Model):
    """Gini-impurity CART classifier."""

    kind = "dt"

    def __init__(self, max_depth: int = 12, min_samples_leaf: int = 2,
                 max_features: int | None = None, seed: int = 0):
        if max_depth < 1:
            raise ConfigError("max_depth must be >= 1")
        if min_samples_leaf < 1:
            raise ConfigError("min_samples_leaf must be >= 1")
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.seed = seed
        self.classes: list[str] = []
        self._tree = _TreeArrays()

    def fit(self, X: np.ndarray, y: np.ndarray,
            classes: list[str] | None = None) -> "DecisionTree":
        X = np.asarray(X, dtype=np.float64)
        if len(X) == 0:
            raise ConfigError("cannot train on an empty dataset")
        self.classes = list(classes) if classes is not None \
            else sorted(set(map(str, y)))
        class_index = {c: i for i, c in enumerate(self.classes)}
        y_idx = np.array([class_index[str(label)] for label in y], dtype=np.int64)
        rng = np.random.default_rng(self.seed) if self.max_features else None
        self._tree = _TreeArrays()
        self._grow(X, y_idx, depth=0, rng=rng)
        self._tree.freeze()
        return self

    def _grow(self, X, y_idx, depth, rng) -> int:
        node = self._tree.add_node()
        counts = np.bincount(y_idx, minlength=len(self.classes))
        majority = int(np.argmax(counts))
        self._tree.value[node] = float(majority)
        n = len(y_idx)
        if depth >= self.max_depth or n < 2 * self.min_samples_leaf \
                or counts[majority] == n:
            return node
        features = _candidate_features(X.shape[1], self.max_features, rng)
        parent_score = float((counts.astype(float) ** 2).sum() / n)
        split = _best_split_gini(X, y_idx, len(self.classes), features,
                                 self.min_samples_leaf)
        if split is None or split[2] <= parent_score + _EPS:
            return node
        f, thr, _ = split
        mask = X[:, f] <= thr
        left = self._grow(X[mask], y_idx[mask], depth + 1, rng)
        right = self._grow(X[~mask], y_idx[~mask], depth + 1, rng)
        self._tree.feature[node] = f
        self._tree.threshold[node] = thr
        self._tree.left[node] = left
        self._tree.right[node] = right
        return node

    def predict_indices(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
        leaves = self._tree.leaf_indices(X)
        return self._tree.value[leaves].astype(np.int64)

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = self.predict_indices(X)
        return np.asarray(self.classes, dtype=object)[idx]

    def to_dict(self) -> dict:
        return {"max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "max_features": self.max_features,
                "seed": self.seed,
                "classes": self.classes,
                "tree": self._tree.to_lists()}

    @classmethod
    def from_dict(cls, d: dict) -> "DecisionTree":
        model = cls(d["max_depth"], d["min_samples_leaf"], d["max_features"],
                    d["seed"])
        model.classes = list(d["classes"])
        model._tree = _TreeArrays.from_lists(d["tree"])
        return model


class RegressionTree:
    """Squared-error CART regressor fitting Newton leaf values; the boosting
    stage supplies per-sample gradients and hessians."""

    def __init__(self, max_depth: int = 4, min_samples_leaf: int = 1,
                 max_features: int | None = None,
                 rng: np.random.Generator | None = None):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.rng = rng
        self._tree = _TreeArrays()

    def fit(self, X: np.ndarray, grad: np.ndarray, hess: np.ndarray
            ) -> "RegressionTree":
        X = np.asarray(X, dtype=np.float64)
        self._tree = _TreeArrays()
        self._grow(X, np.asarray(grad, float), np.asarray(hess, float), 0)
        self._tree.freeze()
        self.rng = None  # release; only needed during fit
        return self

    def _grow(self, X, grad, hess, depth) -> int:
        node = self._tree.add_node()
        self._tree.value[node] = float(grad.sum() / max(hess.sum(), _EPS))
        n = len(grad)
        if depth >= self.max_depth or n < 2 * self.min_samples_leaf:
            return node
        features = _candidate_features(X.shape[1], self.max_features, self.rng)
        parent_score = float(grad.sum() ** 2 / n)
        split = _best_split_mse(X, grad, features, self.min_samples_leaf)
        if split is None or split[2] <= parent_score + _EPS:
            return node
        f, thr, _ = split
        mask = X[:, f] <= thr
        left = self._grow(X[mask], grad[mask], hess[mask], depth + 1)
        right = self._grow(X[~mask], grad[~mask], hess[~mask], depth + 1)
        self._tree.feature[node] = f
        self._tree.threshold[node] = thr
        self._tree.left[node] = left
        self._tree.right[node] = right
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(len(X), -1)
        return self._tree.value[self._tree.leaf_indices(X)]

    def to_dict(self) -> dict:
        return {"max_depth": self.max_depth,
                "min_samples_leaf": self.min_samples_leaf,
                "tree": self._tree.to_lists()}

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionTree":
        tree = cls(d["max_depth"], d["min_samples_leaf"])
        tree._tree = _TreeArrays.from_lists(d["tree"])
        return tree
