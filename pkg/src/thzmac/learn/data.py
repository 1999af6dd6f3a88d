"""Datasets: feature extraction, assembly from solved snapshots, splitting.

One data point describes a (UE, candidate AP) pair inside a snapshot; its
label is the relative label of that AP as seen from the UE. The feature
schema covers every quantity the label depends on, so the mapping is
learnable in principle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConfigError
from ..labeling import label_of
from ..scoring import UNASSIGNED, Assignment
from ..topology import Snapshot

FEATURE_NAMES = (
    "ue_r", "ue_theta_sin", "ue_theta_cos", "ue_demand",
    "ap_r", "ap_theta_sin", "ap_theta_cos", "ap_capacity",
    "distance", "blockers", "ue_local_density", "in_initial_cluster",
)

# Neighborhood radius for the local-density feature, as a fraction of the
# disk radius.
DENSITY_RADIUS_FRACTION = 0.1


@dataclass(frozen=True)
class DataPoint:
    features: np.ndarray
    label: str


class Dataset:
    """Feature matrix plus string labels under a fixed schema."""

    def __init__(self, schema: Sequence[str], X: np.ndarray, y: Sequence[str]):
        self.schema = tuple(schema)
        self.X = np.asarray(X, dtype=np.float64).reshape(-1, len(self.schema))
        self.y = np.asarray(list(y), dtype=object)
        if len(self.X) != len(self.y):
            raise ConfigError("feature matrix and labels disagree in length")
        if np.isnan(self.X).any():
            raise ConfigError("dataset contains missing values")

    def __len__(self) -> int:
        return len(self.y)

    def row(self, i: int) -> DataPoint:
        return DataPoint(self.X[i], str(self.y[i]))

    def classes(self) -> list[str]:
        return sorted(set(self.y))

    def class_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for label in self.y:
            out[label] = out.get(label, 0) + 1
        return out

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.schema, self.X[idx], self.y[idx])

    def concat(self, other: "Dataset") -> "Dataset":
        if other.schema != self.schema:
            raise ConfigError("cannot concatenate datasets with different schemas")
        return Dataset(self.schema, np.vstack([self.X, other.X]),
                       list(self.y) + list(other.y))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(self.schema) + ["label"])
            for x, label in zip(self.X, self.y):
                writer.writerow([repr(float(v)) for v in x] + [label])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if not header or header[-1] != "label":
                raise ConfigError(f"{path}: last CSV column must be 'label'")
            schema = header[:-1]
            X, y = [], []
            for line in reader:
                X.append([float(v) for v in line[:-1]])
                y.append(line[-1])
        return cls(schema, np.array(X, dtype=float).reshape(-1, len(schema)), y)


# ---------------------------------------------------------------------------
# Feature extraction
# ---------------------------------------------------------------------------

def local_ue_density(snapshot: Snapshot, ue_id: int) -> int:
    """Other UEs within DENSITY_RADIUS_FRACTION * disk_radius of the UE."""
    cache = getattr(snapshot, "_ue_density_cache", None)
    if cache is None:
        xy = snapshot.ue_xy()
        if len(xy) == 0:
            cache = np.zeros(0, dtype=np.int64)
        else:
            radius = DENSITY_RADIUS_FRACTION * snapshot.disk_radius
            diff = xy[:, None, :] - xy[None, :, :]
            d2 = (diff * diff).sum(axis=2)
            cache = ((d2 <= radius * radius).sum(axis=1) - 1).astype(np.int64)
        snapshot._ue_density_cache = cache
    return int(cache[ue_id])


def featurize(ue_id: int, ap_id: int, snapshot: Snapshot,
              partial_load: np.ndarray | None = None) -> np.ndarray:
    """Fixed-order feature vector for one (UE, candidate AP) pair.

    ``partial_load`` is accepted for interface stability (running loads are
    known at prediction time) but the current schema does not use it.
    """
    ue = snapshot.ues[ue_id]
    ap = snapshot.aps[ap_id]
    ux, uy = ue.pos.xy()
    ax, ay = ap.pos.xy()
    return np.array([
        ue.pos.r, math.sin(ue.pos.theta), math.cos(ue.pos.theta), ue.demand_rr,
        ap.pos.r, math.sin(ap.pos.theta), math.cos(ap.pos.theta), ap.capacity_rr,
        math.hypot(ax - ux, ay - uy),
        float(snapshot.blocker_matrix()[ue_id, ap_id]),
        float(local_ue_density(snapshot, ue_id)),
        1.0 if snapshot.cluster_of.get(ue_id) == ap_id else 0.0,
    ], dtype=np.float64)


def build_training_set(solved: Iterable[tuple[Snapshot, Assignment]]) -> Dataset:
    """One labeled row per assigned UE per solved snapshot; the solver's
    chosen AP is the ground truth."""
    X, y = [], []
    for snapshot, assignment in solved:
        for ue_id in range(snapshot.n_ues):
            ap_id = int(assignment.ap_of[ue_id])
            if ap_id == UNASSIGNED:
                continue
            X.append(featurize(ue_id, ap_id, snapshot))
            y.append(str(label_of(ue_id, ap_id, snapshot)))
    matrix = np.array(X, dtype=float).reshape(-1, len(FEATURE_NAMES))
    return Dataset(FEATURE_NAMES, matrix, y)


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def stratified_split(dataset: Dataset, train_frac: float = 0.95,
                     seed: int = 0) -> tuple[Dataset, Dataset]:
    """Per-class proportional split with largest-remainder rounding.

    Validation quotas are floor(share) per class, with the remaining slots
    going to the largest fractional parts (ties favor the bigger class,
    then the lexicographically smaller name). Every represented class keeps
    at least one training row; single-row classes stay in training.
    """
    if not 0.0 <= train_frac <= 1.0:
        raise ConfigError("train_frac must be in [0, 1]")
    n = len(dataset)
    val_share = 1.0 - train_frac
    target_total = round(val_share * n)

    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(dataset.y):
        by_class.setdefault(label, []).append(i)

    quotas: dict[str, int] = {}
    remainders: list[tuple[float, int, str]] = []
    for label, rows in by_class.items():
        exact = val_share * len(rows)
        quotas[label] = int(math.floor(exact))
        remainders.append((exact - math.floor(exact), len(rows), label))
    remaining = target_total - sum(quotas.values())
    remainders.sort(key=lambda t: (-t[0], -t[1], t[2]))
    for _, _, label in remainders:
        if remaining <= 0:
            break
        cap = len(by_class[label]) - 1 - quotas[label]
        if cap > 0:
            quotas[label] += 1
            remaining -= 1
    # Enforce the >=1-training-row rule even for floor quotas.
    for label, rows in by_class.items():
        quotas[label] = min(quotas[label], max(len(rows) - 1, 0))

    rng = np.random.default_rng(seed)
    val_idx: list[int] = []
    train_idx: list[int] = []
    for label in sorted(by_class):
        rows = by_class[label]
        picked = rng.permutation(len(rows))[:quotas[label]]
        chosen = {rows[p] for p in picked}
        val_idx.extend(sorted(chosen))
        train_idx.extend(i for i in rows if i not in chosen)
    return dataset.subset(sorted(train_idx)), dataset.subset(sorted(val_idx))
