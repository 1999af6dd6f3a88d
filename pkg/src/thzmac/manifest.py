"""Run manifests: config echo, seeds, and input/output digests.

Every CLI command writes one manifest next to its primary output. Two runs
of the same seeded command must record identical output digests; that is
the reproducibility contract checked by the acceptance suite (the manifest
file itself carries wall-clock fields and is not byte-compared).
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

from . import __version__


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest_path(primary_output) -> Path:
    return Path(str(primary_output) + ".manifest.json")


def write_manifest(primary_output, command: str, config: dict,
                   seeds: list[int], inputs: list, outputs: list,
                   wall_clock_s: float) -> Path:
    doc = {
        "command": command,
        "config": config,
        "seeds": seeds,
        "version": __version__,
        "inputs": {str(p): file_digest(p) for p in inputs},
        "outputs": {str(p): file_digest(p) for p in outputs},
        "wallClockSeconds": wall_clock_s,
        "createdAt": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = manifest_path(primary_output)
    path.write_text(json.dumps(doc, indent=1))
    return path


def read_manifest(primary_output) -> dict:
    return json.loads(manifest_path(primary_output).read_text())
