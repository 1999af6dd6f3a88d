"""Model base class, registry, and the training entry point."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError

_REGISTRY: dict[str, type] = {}


def register_model(kind: str):
    def wrap(cls):
        _REGISTRY[kind] = cls
        cls.kind = kind
        return cls
    return wrap


def model_class(kind: str) -> type:
    try:
        return _REGISTRY[kind]
    except KeyError:
        raise ConfigError(f"unknown model kind {kind!r}; choose from "
                          f"{sorted(_REGISTRY)}") from None


class Model:
    """Trained classifier: fit(X, y) then predict(X) -> label array.

    Single-class training data is legal and yields a constant predictor.
    Models are immutable after fit and safe to share; prediction is pure.
    """

    kind = "?"
    classes: list[str]

    def fit(self, X: np.ndarray, y: np.ndarray) -> "Model":
        raise NotImplementedError

    def predict(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_one(self, x: np.ndarray) -> str:
        return str(self.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def to_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_dict(cls, d: dict) -> "Model":
        raise NotImplementedError


def train_classifier(kind: str, train, hyper: dict | None = None,
                     seed: int = 0) -> Model:
    """Train one of the registered families ('dt', 'rf', 'gbt', 'nb') on a
    Dataset; ``hyper`` overrides the constructor defaults."""
    if len(train) == 0:
        raise ConfigError("cannot train on an empty dataset")
    cls = model_class(kind)
    kwargs = dict(hyper or {})
    if "seed" in cls.__init__.__code__.co_varnames:
        kwargs.setdefault("seed", seed)
    model = cls(**kwargs)
    model.fit(train.X, train.y)
    return model


MODEL_KINDS = ("dt", "rf", "gbt", "nb")
