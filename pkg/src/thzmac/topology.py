"""Network snapshots: node placement, blocker geometry, initial clustering.

A snapshot freezes one network instance: access points (APs) with radio
resource (RR) capacities, user equipments (UEs) with RR demands, all placed
in a disk, plus the blocker-corridor radius used for line-of-sight checks
and a distance-based initial clustering.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConfigError, InvariantError
from .geometry import corridor_blockers, polar_to_xy

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PolarPoint:
    """Position in polar form; ``theta`` normalized to [0, 2*pi)."""

    r: float
    theta: float

    def xy(self) -> tuple[float, float]:
        return polar_to_xy(self.r, self.theta)


@dataclass(frozen=True)
class AccessPoint:
    id: int
    pos: PolarPoint
    capacity_rr: int


@dataclass(frozen=True)
class UserEquipment:
    id: int
    pos: PolarPoint
    demand_rr: int


@dataclass(frozen=True)
class SnapshotConfig:
    """Generation parameters for one snapshot.

    ``n_aps``/``n_ues`` are exact counts by default; with ``poisson=True``
    they are treated as the means of Poisson draws (the AP count is clamped
    to at least 1).
    """

    area_km2: float = 1.0
    n_aps: int = 125
    n_ues: int = 741
    capacity_range: tuple[int, int] = (50, 150)
    demand_range: tuple[int, int] = (5, 20)
    blocker_radius: float = 1.0
    seed: int = 0
    poisson: bool = False
    kmeans_max_iter: int = 20

    def validate(self) -> None:
        if self.area_km2 <= 0:
            raise ConfigError(f"area_km2 must be positive, got {self.area_km2}")
        if self.n_aps < 1:
            raise ConfigError(f"n_aps must be >= 1, got {self.n_aps}")
        if self.n_ues < 0:
            raise ConfigError(f"n_ues must be >= 0, got {self.n_ues}")
        for name, (lo, hi) in (("capacity_range", self.capacity_range),
                               ("demand_range", self.demand_range)):
            if lo > hi:
                raise ConfigError(f"{name} is empty: ({lo}, {hi})")
        if self.demand_range[0] <= 0:
            raise ConfigError("demands must be positive")
        if self.capacity_range[0] < 0:
            raise ConfigError("capacities must be non-negative")
        if self.blocker_radius < 0:
            raise ConfigError("blocker_radius must be non-negative")


class Snapshot:
    """Immutable network instance. Safe to share across workers.

    Derived geometry (Cartesian coordinates, the UE x AP blocker-count
    matrix, per-UE AP distance rankings) is computed lazily and cached.
    """

    def __init__(self, aps: Iterable[AccessPoint], ues: Iterable[UserEquipment],
                 area_km2: float, blocker_radius: float, seed: int,
                 cluster_of: dict[int, int] | None = None):
        self.aps = tuple(aps)
        self.ues = tuple(ues)
        self.area_km2 = float(area_km2)
        self.blocker_radius = float(blocker_radius)
        self.seed = int(seed)
        self.cluster_of = dict(cluster_of) if cluster_of is not None else {}
        self._check_invariants()
        self._blocker_matrix: np.ndarray | None = None
        self._ap_rank: np.ndarray | None = None

    # -- structural ---------------------------------------------------------

    @property
    def n_aps(self) -> int:
        return len(self.aps)

    @property
    def n_ues(self) -> int:
        return len(self.ues)

    @property
    def disk_radius(self) -> float:
        return math.sqrt(self.area_km2 * 1e6 / math.pi)

    def _check_invariants(self) -> None:
        if [a.id for a in self.aps] != list(range(len(self.aps))):
            raise InvariantError("AP ids must be dense 0..N-1")
        if [u.id for u in self.ues] != list(range(len(self.ues))):
            raise InvariantError("UE ids must be dense 0..N-1")
        radius = self.disk_radius
        for node in (*self.aps, *self.ues):
            if node.pos.r > radius * (1 + 1e-9):
                raise InvariantError(f"node {node} outside disk of radius {radius}")
        if self.cluster_of:
            if set(self.cluster_of) != {u.id for u in self.ues}:
                raise InvariantError("cluster_of must be total over UEs")
            ap_ids = {a.id for a in self.aps}
            if not set(self.cluster_of.values()) <= ap_ids:
                raise InvariantError("cluster_of references unknown AP ids")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Snapshot):
            return NotImplemented
        return (self.aps == other.aps and self.ues == other.ues
                and self.area_km2 == other.area_km2
                and self.blocker_radius == other.blocker_radius
                and self.seed == other.seed
                and self.cluster_of == other.cluster_of)

    def __repr__(self) -> str:
        return (f"Snapshot(n_ues={self.n_ues}, n_aps={self.n_aps}, "
                f"area_km2={self.area_km2}, seed={self.seed})")

    # -- cached geometry ----------------------------------------------------

    def ue_xy(self) -> np.ndarray:
        xy = getattr(self, "_ue_xy", None)
        if xy is None:
            xy = np.array([u.pos.xy() for u in self.ues], dtype=float).reshape(-1, 2)
            self._ue_xy = xy
        return xy

    def ap_xy(self) -> np.ndarray:
        xy = getattr(self, "_ap_xy", None)
        if xy is None:
            xy = np.array([a.pos.xy() for a in self.aps], dtype=float).reshape(-1, 2)
            self._ap_xy = xy
        return xy

    def demands(self) -> np.ndarray:
        d = getattr(self, "_demands", None)
        if d is None:
            d = np.array([u.demand_rr for u in self.ues], dtype=np.int64)
            self._demands = d
        return d

    def capacities(self) -> np.ndarray:
        c = getattr(self, "_capacities", None)
        if c is None:
            c = np.array([a.capacity_rr for a in self.aps], dtype=np.int64)
            self._capacities = c
        return c

    def blocker_matrix(self) -> np.ndarray:
        """(n_ues, n_aps) int32 matrix of per-link blocker counts."""
        if self._blocker_matrix is None:
            self._blocker_matrix = _blocker_matrix(self.ue_xy(), self.ap_xy(),
                                                   self.blocker_radius)
        return self._blocker_matrix

    def ap_rank_by_distance(self) -> np.ndarray:
        """(n_ues, n_aps) AP ids sorted by distance from each UE (ties by id)."""
        if self._ap_rank is None:
            if self.n_ues == 0:
                self._ap_rank = np.zeros((0, self.n_aps), dtype=np.int64)
            else:
                diff = self.ue_xy()[:, None, :] - self.ap_xy()[None, :, :]
                d2 = (diff * diff).sum(axis=2)
                self._ap_rank = np.argsort(d2, axis=1, kind="stable")
        return self._ap_rank

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "meta": {"seed": self.seed, "areaKm2": self.area_km2,
                     "blockerRadius": self.blocker_radius},
            "aps": [{"id": a.id, "r": a.pos.r, "theta": a.pos.theta,
                     "capacity": a.capacity_rr} for a in self.aps],
            "ues": [{"id": u.id, "r": u.pos.r, "theta": u.pos.theta,
                     "demand": u.demand_rr} for u in self.ues],
            "clusters": {str(k): v for k, v in sorted(self.cluster_of.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "Snapshot":
        try:
            meta = d["meta"]
            aps = [AccessPoint(a["id"], PolarPoint(a["r"], a["theta"]), a["capacity"])
                   for a in d["aps"]]
            ues = [UserEquipment(u["id"], PolarPoint(u["r"], u["theta"]), u["demand"])
                   for u in d["ues"]]
            clusters = {int(k): v for k, v in d.get("clusters", {}).items()}
            return cls(aps, ues, meta["areaKm2"], meta["blockerRadius"],
                       meta["seed"], clusters)
        except (KeyError, TypeError) as exc:
            raise InvariantError(f"malformed snapshot document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Snapshot":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------

def generate_snapshot(cfg: SnapshotConfig) -> Snapshot:
    """Draw one snapshot: uniform placement in a disk of area ``area_km2``.

    Counts are fixed (the point process conditioned on the observed number
    of nodes); radii are drawn as R*sqrt(u) so the density is uniform over
    the disk. Capacities and demands are integer-uniform over their ranges.
    Fully deterministic given ``cfg.seed``.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n_aps, n_ues = cfg.n_aps, cfg.n_ues
    if cfg.poisson:
        n_aps = max(1, int(rng.poisson(cfg.n_aps)))
        n_ues = int(rng.poisson(cfg.n_ues))
    radius = math.sqrt(cfg.area_km2 * 1e6 / math.pi)

    ap_r = radius * np.sqrt(rng.random(n_aps))
    ap_theta = rng.random(n_aps) * TWO_PI
    caps = rng.integers(cfg.capacity_range[0], cfg.capacity_range[1] + 1, n_aps)
    ue_r = radius * np.sqrt(rng.random(n_ues))
    ue_theta = rng.random(n_ues) * TWO_PI
    demands = rng.integers(cfg.demand_range[0], cfg.demand_range[1] + 1, n_ues)

    aps = [AccessPoint(i, PolarPoint(float(ap_r[i]), float(ap_theta[i])), int(caps[i]))
           for i in range(n_aps)]
    ues = [UserEquipment(i, PolarPoint(float(ue_r[i]), float(ue_theta[i])), int(demands[i]))
           for i in range(n_ues)]
    snap = Snapshot(aps, ues, cfg.area_km2, cfg.blocker_radius, cfg.seed)
    snap.cluster_of.update(initial_clustering(snap, max_iter=cfg.kmeans_max_iter))
    return snap


def _blocker_matrix(ue_xy: np.ndarray, ap_xy: np.ndarray, radius: float) -> np.ndarray:
    n_ue = len(ue_xy)
    n_ap = len(ap_xy)
    counts = np.zeros((n_ue, n_ap), dtype=np.int32)
    if n_ue <= 1 or n_ap == 0 or radius <= 0.0:
        return counts
    # Pairwise squared distances between UEs (candidate blockers vs link owners).
    gram = ue_xy @ ue_xy.T
    sq = np.diag(gram)
    d2_ue = sq[:, None] + sq[None, :] - 2.0 * gram
    r2 = radius * radius
    eye = np.eye(n_ue, dtype=bool)
    for j in range(n_ap):
        w = ap_xy[j][None, :] - ue_xy            # per-link direction, (n_ue, 2)
        w2 = (w * w).sum(axis=1)                 # squared link lengths
        # proj[k, i] = (p_k - p_i) . w_i
        proj = ue_xy @ w.T - (ue_xy * w).sum(axis=1)[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            d2_perp = d2_ue - np.where(w2 > 0.0, proj * proj / w2, np.inf)
        mask = (proj > 0.0) & (proj < w2[None, :]) & (d2_perp < r2) & ~eye
        counts[:, j] = mask.sum(axis=0)
    return counts


def blocker_count(snapshot: Snapshot, ue_id: int, ap_id: int) -> int:
    """Number of other UEs inside the open corridor of the UE->AP link."""
    if not (0 <= ue_id < snapshot.n_ues):
        raise ConfigError(f"unknown UE id {ue_id}")
    if not (0 <= ap_id < snapshot.n_aps):
        raise ConfigError(f"unknown AP id {ap_id}")
    return int(snapshot.blocker_matrix()[ue_id, ap_id])


def blocker_count_direct(snapshot: Snapshot, ue_id: int, ap_id: int) -> int:
    """Uncached single-link recomputation; used as a cross-check oracle."""
    ue_xy = snapshot.ue_xy()
    start = ue_xy[ue_id]
    end = snapshot.ap_xy()[ap_id]
    mask = corridor_blockers(ue_xy, start, end, snapshot.blocker_radius)
    mask[ue_id] = False
    return int(mask.sum())


# ---------------------------------------------------------------------------
# Initial clustering
# ---------------------------------------------------------------------------

def initial_clustering(snapshot: Snapshot, max_iter: int = 20) -> dict[int, int]:
    """Distance-only k-means seeded at the AP positions, k = n_aps.

    Lloyd iterations in Cartesian coordinates; empty clusters keep their
    centroid. Each final centroid is owned by the nearest AP (ties to the
    smallest id), and every UE maps to the AP owning its cluster's centroid.
    Blockers are deliberately ignored here.
    """
    if snapshot.n_ues == 0:
        return {}
    points = snapshot.ue_xy()
    centroids = snapshot.ap_xy().copy()
    assign = np.full(snapshot.n_ues, -1, dtype=np.int64)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(d2, axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for k in range(len(centroids)):
            members = points[assign == k]
            if len(members):
                centroids[k] = members.mean(axis=0)
    ap_xy = snapshot.ap_xy()
    d2_owner = ((centroids[:, None, :] - ap_xy[None, :, :]) ** 2).sum(axis=2)
    owner = np.argmin(d2_owner, axis=1)
    return {int(u): int(owner[assign[u]]) for u in range(snapshot.n_ues)}


# ---------------------------------------------------------------------------
# Scale diagnostics
# ---------------------------------------------------------------------------

def search_space_log10(n_aps: int, n_ues: int) -> float:
    """log10 of the number of total UE->AP assignment combinations."""
    if n_aps < 1:
        raise ConfigError(f"n_aps must be >= 1, got {n_aps}")
    if n_ues < 0:
        raise ConfigError(f"n_ues must be >= 0, got {n_ues}")
    return n_ues * math.log10(n_aps)


def blockage_pair_stats(snapshot: Snapshot) -> dict[str, float]:
    """Corridor statistics over all UE x AP pairs."""
    matrix = snapshot.blocker_matrix()
    if matrix.size == 0:
        return {"avgBlockersPerPair": 0.0, "fracPairsBlocked": 0.0}
    return {
        "avgBlockersPerPair": float(matrix.mean()),
        "fracPairsBlocked": float((matrix >= 1).mean()),
    }
