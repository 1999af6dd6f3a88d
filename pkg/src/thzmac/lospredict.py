"""Synthetic LoS/NLoS channel scenes and the model-comparison report.

A fixed transmitter and a walking receiver share a square scene scattered
with rectangular obstacles. Ground truth is pure geometry (segment vs
rectangle occlusion); channel features are derived from the direct path,
with blocked steps picking up extra delay and attenuation, plus optional
Gaussian feature noise. This stands in for a measured drive-test dataset
while keeping the ground truth independently checkable.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .geometry import segment_intersects_rect, wrap_angle
from .learn import Dataset, evaluate, train_classifier
from .learn.data import stratified_split

SPEED_OF_LIGHT = 299_792_458.0

LOS_LABEL = "LoS"
NLOS_LABEL = "NLoS"

PATH_COLUMNS = ("coeff_mag", "delay_s", "aaod", "eaod", "aaoa", "eaoa",
                "dsa", "aa", "tx_x", "tx_y", "rx_x", "rx_y")

# Per-feature noise scales multiplied by cfg.noise_sigma.
_NOISE_EXCESS_M = 3.0       # extra path length jitter, meters
_NOISE_ANGLE_RAD = 0.03
_NOISE_COEFF_DB = 2.0
_NLOS_DETOUR_M = 25.0       # mean extra path length when blocked
_NLOS_ATTENUATION_DB = 20.0
_DSA_LOS = 0.02             # delay-spread-angle base levels, radians
_DSA_NLOS = 0.25


@dataclass(frozen=True)
class SceneConfig:
    n_obstacles: int = 12
    obstacle_size_range: tuple[float, float] = (5.0, 25.0)
    route_length_m: float = 400.0
    step_m: float = 1.0
    noise_sigma: float = 1.0
    seed: int = 0
    scene_size_m: float = 200.0
    tx_height_m: float = 10.0
    rx_height_m: float = 1.5

    def validate(self) -> None:
        if self.n_obstacles < 0:
            raise ConfigError("n_obstacles must be >= 0")
        lo, hi = self.obstacle_size_range
        if not 0 < lo <= hi:
            raise ConfigError("obstacle_size_range must satisfy 0 < lo <= hi")
        if self.route_length_m <= 0 or self.step_m <= 0:
            raise ConfigError("route length and step must be positive")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        if self.scene_size_m <= 0:
            raise ConfigError("scene_size_m must be positive")


@dataclass(frozen=True)
class PathRecord:
    coeff_mag: float
    delay_s: float
    aaod: float
    eaod: float
    aaoa: float
    eaoa: float
    dsa: float
    aa: float
    tx_pos: tuple[float, float]
    rx_pos: tuple[float, float]
    los: bool

    def numeric(self) -> tuple[float, ...]:
        return (self.coeff_mag, self.delay_s, self.aaod, self.eaod, self.aaoa,
                self.eaoa, self.dsa, self.aa, self.tx_pos[0], self.tx_pos[1],
                self.rx_pos[0], self.rx_pos[1])


@dataclass(frozen=True)
class AggregateRecord:
    means: tuple[float, ...]
    spreads: tuple[float, ...]  # max - min per feature
    los: bool


def place_obstacles(cfg: SceneConfig, rng: np.random.Generator,
                    tx: tuple[float, float]) -> list[tuple[float, float, float, float]]:
    """Axis-aligned rectangles uniform in the scene, never covering the Tx."""
    rects = []
    attempts = 0
    while len(rects) < cfg.n_obstacles:
        attempts += 1
        if attempts > 100 * max(cfg.n_obstacles, 1):
            raise ConfigError("could not place obstacles clear of the Tx; "
                              "shrink them or enlarge the scene")
        w = rng.uniform(*cfg.obstacle_size_range)
        h = rng.uniform(*cfg.obstacle_size_range)
        cx = rng.uniform(0.0, cfg.scene_size_m)
        cy = rng.uniform(0.0, cfg.scene_size_m)
        rect = (cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)
        if rect[0] <= tx[0] <= rect[2] and rect[1] <= tx[1] <= rect[3]:
            continue
        rects.append(rect)
    return rects


def line_of_sight(tx: tuple[float, float], rx: tuple[float, float],
                  rects: Iterable[tuple[float, float, float, float]]) -> bool:
    return not any(segment_intersects_rect(tx, rx, r) for r in rects)


def generate_scene(cfg: SceneConfig) -> tuple[list[PathRecord],
                                              list[tuple[float, float, float, float]]]:
    """Walk one route and emit floor(route_length/step) path records.

    The receiver walks fixed-length steps with a slowly drifting heading,
    reflecting off the scene walls. Every record satisfies
    delay >= straight-line distance / c by construction.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    size = cfg.scene_size_m
    tx = (size / 2.0, size / 2.0)
    rects = place_obstacles(cfg, rng, tx)

    n_steps = int(cfg.route_length_m / cfg.step_m)
    x = rng.uniform(0.0, size)
    y = rng.uniform(0.0, size)
    heading = rng.uniform(0.0, 2.0 * math.pi)
    dz = cfg.rx_height_m - cfg.tx_height_m

    records: list[PathRecord] = []
    for _ in range(n_steps):
        heading += rng.normal(0.0, 0.3)
        x += cfg.step_m * math.cos(heading)
        y += cfg.step_m * math.sin(heading)
        if x < 0.0 or x > size:
            x = min(max(-x if x < 0 else 2 * size - x, 0.0), size)
            heading = math.pi - heading
        if y < 0.0 or y > size:
            y = min(max(-y if y < 0 else 2 * size - y, 0.0), size)
            heading = -heading

        rx = (x, y)
        los = line_of_sight(tx, rx, rects)
        dxy = math.hypot(rx[0] - tx[0], rx[1] - tx[1])
        dist = math.hypot(dxy, dz)

        s = cfg.noise_sigma
        detour = 0.0 if los else _NLOS_DETOUR_M
        excess = max(0.0, detour + rng.normal(0.0, _NOISE_EXCESS_M * s))
        delay = (dist + excess) / SPEED_OF_LIGHT

        atten_db = 0.0 if los else _NLOS_ATTENUATION_DB
        coeff_db = -atten_db + rng.normal(0.0, _NOISE_COEFF_DB * s)
        coeff = (1.0 / max(dist, 1.0)) * 10.0 ** (coeff_db / 20.0)

        def angle(base: float) -> float:
            return wrap_angle(base + rng.normal(0.0, _NOISE_ANGLE_RAD * s))

        aaod = angle(math.atan2(rx[1] - tx[1], rx[0] - tx[0]))
        aaoa = angle(math.atan2(tx[1] - rx[1], tx[0] - rx[0]))
        eaod = angle(math.atan2(dz, max(dxy, 1e-9)))
        eaoa = angle(math.atan2(-dz, max(dxy, 1e-9)))
        dsa = wrap_angle(abs((_DSA_LOS if los else _DSA_NLOS)
                             + rng.normal(0.0, _NOISE_ANGLE_RAD * s)))
        aa = angle(math.atan2(rx[1] - size / 2.0, rx[0] - size / 2.0))

        records.append(PathRecord(coeff, delay, aaod, eaod, aaoa, eaoa,
                                  dsa, aa, tx, rx, los))
    return records, rects


# ---------------------------------------------------------------------------
# Aggregation (coarse-granular view)
# ---------------------------------------------------------------------------

def aggregate(records: Sequence[PathRecord], window_size: int
              ) -> list[AggregateRecord]:
    """Non-overlapping windows; per-feature mean and spread (max - min);
    majority LoS flag with ties going to NLoS."""
    if window_size < 1:
        raise ConfigError("window_size must be >= 1")
    out = []
    for start in range(0, len(records) - window_size + 1, window_size):
        chunk = records[start:start + window_size]
        values = np.array([r.numeric() for r in chunk])
        means = tuple(float(v) for v in values.mean(axis=0))
        spreads = tuple(float(v) for v in values.max(axis=0) - values.min(axis=0))
        los_votes = sum(1 for r in chunk if r.los)
        out.append(AggregateRecord(means, spreads, los_votes * 2 > len(chunk)))
    return out


# ---------------------------------------------------------------------------
# Dataset bridges
# ---------------------------------------------------------------------------

def records_to_dataset(records: Sequence[PathRecord]) -> Dataset:
    X = np.array([r.numeric() for r in records], dtype=float).reshape(-1, len(PATH_COLUMNS))
    y = [LOS_LABEL if r.los else NLOS_LABEL for r in records]
    return Dataset(PATH_COLUMNS, X, y)


def aggregates_to_dataset(aggs: Sequence[AggregateRecord]) -> Dataset:
    schema = tuple(f"mean_{c}" for c in PATH_COLUMNS) + \
        tuple(f"spread_{c}" for c in PATH_COLUMNS)
    X = np.array([a.means + a.spreads for a in aggs], dtype=float).reshape(-1, len(schema))
    y = [LOS_LABEL if a.los else NLOS_LABEL for a in aggs]
    return Dataset(schema, X, y)


def records_to_csv(records: Sequence[PathRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(PATH_COLUMNS) + ["label"])
        for r in records:
            writer.writerow([repr(v) for v in r.numeric()]
                            + [LOS_LABEL if r.los else NLOS_LABEL])


def records_from_csv(path) -> Dataset:
    return Dataset.from_csv(path)


# ---------------------------------------------------------------------------
# Model comparison
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    kind: str
    accuracy: float
    precision: dict[str, float]
    recall: dict[str, float]
    confusion_counts: list[list[int]]
    train_seconds: float
    score_seconds: float


def train_los_models(dataset: Dataset, kinds: Sequence[str], seed: int = 0,
                     train_frac: float = 0.8,
                     hyper: dict[str, dict] | None = None) -> list[ComparisonRow]:
    """Train each requested family, evaluate on a held-out stratified split,
    and rank by accuracy (descending) then total time (ascending).

    ``hyper`` maps a model kind to its constructor overrides.
    """
    train, test = stratified_split(dataset, train_frac=train_frac, seed=seed)
    if len(test) == 0:
        raise ConfigError("hold-out split is empty; lower train_frac")
    rows = []
    for kind in kinds:
        t0 = time.perf_counter()
        model = train_classifier(kind, train, hyper=(hyper or {}).get(kind),
                                 seed=seed)
        t1 = time.perf_counter()
        report = evaluate(model, test)
        t2 = time.perf_counter()
        rows.append(ComparisonRow(kind, report.accuracy,
                                  report.per_class_precision,
                                  report.per_class_recall,
                                  report.confusion.counts.tolist(),
                                  t1 - t0, t2 - t1))
    rows.sort(key=lambda r: (-r.accuracy, r.train_seconds + r.score_seconds))
    return rows


def comparison_to_csv(rows: Sequence[ComparisonRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "accuracy", "precision_los", "precision_nlos",
                         "recall_los", "recall_nlos", "train_s", "score_s"])
        for r in rows:
            writer.writerow([
                r.kind, f"{r.accuracy:.6f}",
                f"{r.precision.get(LOS_LABEL, 0.0):.6f}",
                f"{r.precision.get(NLOS_LABEL, 0.0):.6f}",
                f"{r.recall.get(LOS_LABEL, 0.0):.6f}",
                f"{r.recall.get(NLOS_LABEL, 0.0):.6f}",
                f"{r.train_seconds:.6f}", f"{r.score_seconds:.6f}",
            ])
