"""Inference latency measurements for the association mimic.

The three figures of interest: one data-point, one UE scored against every
AP, and one UE scored against its nearest k APs. Medians over repetitions;
wall-clock, so not byte-reproducible by nature.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import ConfigError
from ..topology import Snapshot
from .data import featurize
from .models import Model


def predict_latency_bench(model: Model, snapshot: Snapshot,
                          repetitions: int = 50, nearest_k: int = 3,
                          ue_id: int = 0) -> dict[str, float]:
    """Median per-call wall-clock times in milliseconds.

    Keys: msPerDataPoint, msPerUEAllAPs, msPerUENearestK plus the echo of
    ``nearestK``.
    """
    if repetitions < 1:
        raise ConfigError("repetitions must be >= 1")
    if snapshot.n_ues == 0 or snapshot.n_aps == 0:
        raise ConfigError("latency bench needs at least one UE and one AP")
    if not 0 <= ue_id < snapshot.n_ues:
        raise ConfigError(f"unknown UE id {ue_id}")
    k = min(nearest_k, snapshot.n_aps)

    all_rows = np.stack([featurize(ue_id, ap, snapshot)
                         for ap in range(snapshot.n_aps)])
    near_aps = snapshot.ap_rank_by_distance()[ue_id, :k]
    near_rows = np.stack([featurize(ue_id, int(ap), snapshot) for ap in near_aps])
    single = all_rows[:1]

    def median_ms(batch: np.ndarray) -> float:
        times = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            model.predict(batch)
            times.append((time.perf_counter() - t0) * 1e3)
        return float(np.median(times))

    model.predict(single)  # warm any lazy state before timing
    return {
        "msPerDataPoint": median_ms(single),
        "msPerUEAllAPs": median_ms(all_rows),
        "msPerUENearestK": median_ms(near_rows),
        "nearestK": float(k),
    }
