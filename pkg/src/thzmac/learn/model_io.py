"""Versioned JSON model files, round-trippable across save/load."""

from __future__ import annotations

import json

from ..errors import ConfigError
from .models import Model, model_class

FORMAT = "thzmac-model"
VERSION = 1


def model_to_json(model: Model) -> str:
    doc = {"format": FORMAT, "version": VERSION, "kind": model.kind,
           "payload": model.to_dict()}
    return json.dumps(doc)


def model_from_json(text: str) -> Model:
    doc = json.loads(text)
    if doc.get("format") != FORMAT:
        raise ConfigError("not a model file")
    if doc.get("version") != VERSION:
        raise ConfigError(f"unsupported model file version {doc.get('version')}")
    return model_class(doc["kind"]).from_dict(doc["payload"])


def save_model(model: Model, path) -> None:
    with open(path, "w") as fh:
        fh.write(model_to_json(model))


def load_model(path) -> Model:
    with open(path) as fh:
        return model_from_json(fh.read())
