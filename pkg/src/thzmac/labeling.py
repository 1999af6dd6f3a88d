"""Relative labels: the classifier target describing an AP relative to a UE.

A label composes three sub-classes: the AP's geographic quadrant, its
capacity decile within the snapshot, and the quantized blocker count of
the UE->AP link. String form is "Q-d-b", e.g. "NE-3-0"; there are at most
4 * 10 * 9 = 360 distinct labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .scoring import Assignment
from .topology import Snapshot

QUADRANTS = ("NE", "NW", "SE", "SW")
N_BLOCKAGE_LEVELS = 9


@dataclass(frozen=True)
class RelativeLabel:
    quadrant: str
    capacity_decile: int
    blockage_level: int

    def __post_init__(self):
        if self.quadrant not in QUADRANTS:
            raise ConfigError(f"unknown quadrant {self.quadrant!r}")
        if not 0 <= self.capacity_decile <= 9:
            raise ConfigError(f"capacity decile out of range: {self.capacity_decile}")
        if not 0 <= self.blockage_level <= N_BLOCKAGE_LEVELS - 1:
            raise ConfigError(f"blockage level out of range: {self.blockage_level}")

    def __str__(self) -> str:
        return f"{self.quadrant}-{self.capacity_decile}-{self.blockage_level}"

    @classmethod
    def parse(cls, text: str) -> "RelativeLabel":
        parts = text.split("-")
        if len(parts) != 3:
            raise ConfigError(f"malformed label {text!r}")
        return cls(parts[0], int(parts[1]), int(parts[2]))


def all_labels() -> list[RelativeLabel]:
    return [RelativeLabel(q, d, b)
            for q in QUADRANTS for d in range(10) for b in range(N_BLOCKAGE_LEVELS)]


def quadrant_of(ap_id: int, snapshot: Snapshot) -> str:
    """Quadrant by sign of the AP's Cartesian position; axes (x=0 or y=0)
    belong to the non-negative side."""
    x, y = snapshot.aps[ap_id].pos.xy()
    if x >= 0:
        return "NE" if y >= 0 else "SE"
    return "NW" if y >= 0 else "SW"


def capacity_decile_of(ap_id: int, snapshot: Snapshot) -> int:
    """Empirical-quantile bin of the AP's capacity among all APs in the
    snapshot; tied capacities share the rank of their lowest member, so a
    degenerate all-equal snapshot puts every AP into decile 0."""
    caps = snapshot.capacities()
    below = int((caps < caps[ap_id]).sum())
    return (10 * below) // snapshot.n_aps


def blockage_level_of(ue_id: int, ap_id: int, snapshot: Snapshot) -> int:
    return min(int(snapshot.blocker_matrix()[ue_id, ap_id]), N_BLOCKAGE_LEVELS - 1)


def label_of(ue_id: int, ap_id: int, snapshot: Snapshot) -> RelativeLabel:
    return RelativeLabel(quadrant_of(ap_id, snapshot),
                         capacity_decile_of(ap_id, snapshot),
                         blockage_level_of(ue_id, ap_id, snapshot))


def resolve_label_to_ap(ue_id: int, label: RelativeLabel, snapshot: Snapshot,
                        partial: Assignment | None = None) -> int:
    """Map a predicted label back to a concrete AP.

    Candidates are the APs matching the label's (quadrant, decile); the
    winner minimizes the blockage-level mismatch, then has the most
    remaining capacity under ``partial``, then the smallest distance to the
    UE, then the smallest id. When no AP matches the pair, the decile is
    relaxed to the nearest populated one within the quadrant (ties toward
    the lower decile); an empty quadrant falls back to all APs with the
    same nearest-decile rule. Total by construction for any snapshot with
    at least one AP.
    """
    if snapshot.n_aps == 0:
        raise ConfigError("cannot resolve a label in a snapshot without APs")
    quadrants = [quadrant_of(a, snapshot) for a in range(snapshot.n_aps)]
    deciles = [capacity_decile_of(a, snapshot) for a in range(snapshot.n_aps)]

    pool = [a for a in range(snapshot.n_aps) if quadrants[a] == label.quadrant]
    if not pool:
        pool = list(range(snapshot.n_aps))
    populated = sorted({deciles[a] for a in pool})
    target = min(populated, key=lambda d: (abs(d - label.capacity_decile), d))
    candidates = [a for a in pool if deciles[a] == target]

    load = partial.load if partial is not None else np.zeros(snapshot.n_aps, dtype=np.int64)
    caps = snapshot.capacities()
    ue_x, ue_y = snapshot.ues[ue_id].pos.xy()

    def rank(ap: int):
        ax, ay = snapshot.aps[ap].pos.xy()
        dist = math.hypot(ax - ue_x, ay - ue_y)
        remaining = int(caps[ap]) - int(load[ap])
        mismatch = abs(blockage_level_of(ue_id, ap, snapshot) - label.blockage_level)
        return (mismatch, -remaining, dist, ap)

    return min(candidates, key=rank)
