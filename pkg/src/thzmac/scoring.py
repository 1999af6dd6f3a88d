"""Candidate associations and their constraint-based scores.

The score is a 4-level lexicographic penalty vector, lower is better:
unassigned UEs (feasibility), blocked links, overloaded RR units, APs in
use. Capacity is ranked below blockage on purpose: a good solver happily
overloads a few APs to reach zero blockers, and the score must reflect
that preference. Both a full recomputation and an O(1) incremental delta
are provided; the delta is the solver's hot path and the full evaluation
is its oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import ConfigError
from .topology import Snapshot

UNASSIGNED = -1

DEFAULT_WEIGHTS = (10**9, 10**6, 10**3, 1)
LEVELS = ("unassigned", "blockers", "overload_rr", "aps_used")
DEFAULT_ORDER = LEVELS


@dataclass(frozen=True, order=True)
class ScoreVector:
    """Lexicographic penalty; field order is the comparison order."""

    unassigned: int
    blockers: int
    overload_rr: int
    aps_used: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.unassigned, self.blockers, self.overload_rr, self.aps_used)

    def scalar(self, weights: tuple = DEFAULT_WEIGHTS) -> int:
        t = self.as_tuple()
        return sum(w * v for w, v in zip(weights, t))

    def __sub__(self, other: "ScoreVector") -> "ScoreDelta":
        return ScoreDelta(self.unassigned - other.unassigned,
                          self.blockers - other.blockers,
                          self.overload_rr - other.overload_rr,
                          self.aps_used - other.aps_used)

    def __add__(self, delta: "ScoreDelta") -> "ScoreVector":
        return ScoreVector(self.unassigned + delta.unassigned,
                           self.blockers + delta.blockers,
                           self.overload_rr + delta.overload_rr,
                           self.aps_used + delta.aps_used)


class ScoreDelta(NamedTuple):
    unassigned: int
    blockers: int
    overload_rr: int
    aps_used: int

    def scalar(self, weights: tuple = DEFAULT_WEIGHTS) -> int:
        return sum(w * v for w, v in zip(weights, self))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self)


def order_permutation(order: tuple[str, ...]) -> tuple[int, ...]:
    """Map a level-name order like ('blockers', 'unassigned', ...) to
    component indices of :class:`ScoreVector`."""
    if sorted(order) != sorted(LEVELS):
        raise ConfigError(f"score order must permute {LEVELS}, got {order}")
    return tuple(LEVELS.index(name) for name in order)


def order_key(vec: ScoreVector, order: tuple[str, ...] = DEFAULT_ORDER) -> tuple:
    perm = order_permutation(order)
    t = vec.as_tuple()
    return tuple(t[i] for i in perm)


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Change:
    ue: int
    new_ap: int


@dataclass(frozen=True)
class Swap:
    ue_a: int
    ue_b: int


Move = Union[Change, Swap]


# ---------------------------------------------------------------------------
# Assignment
# ---------------------------------------------------------------------------

class Assignment:
    """Total UE->AP map (UNASSIGNED allowed) with incrementally-maintained
    caches: per-AP load and UE count, per-UE blocker count of the current
    link. Single-owner mutable; copy before handing to another worker.
    """

    def __init__(self, snapshot: Snapshot, ap_of: np.ndarray | None = None):
        self.snapshot = snapshot
        n_ue, n_ap = snapshot.n_ues, snapshot.n_aps
        if ap_of is None:
            self.ap_of = np.full(n_ue, UNASSIGNED, dtype=np.int64)
        else:
            self.ap_of = np.asarray(ap_of, dtype=np.int64).copy()
            if self.ap_of.shape != (n_ue,):
                raise ConfigError("ap_of must have one entry per UE")
            if ((self.ap_of < UNASSIGNED) | (self.ap_of >= n_ap)).any():
                raise ConfigError("assignment references unknown AP ids")
        self.load = np.zeros(n_ap, dtype=np.int64)
        self.ue_count = np.zeros(n_ap, dtype=np.int64)
        self.link_blockers = np.zeros(n_ue, dtype=np.int64)
        self._rebuild_caches()

    def _rebuild_caches(self) -> None:
        snap = self.snapshot
        self.load[:] = 0
        self.ue_count[:] = 0
        self.link_blockers[:] = 0
        demands = snap.demands()
        blk = snap.blocker_matrix()
        for ue in range(snap.n_ues):
            ap = self.ap_of[ue]
            if ap != UNASSIGNED:
                self.load[ap] += demands[ue]
                self.ue_count[ap] += 1
                self.link_blockers[ue] = blk[ue, ap]

    @classmethod
    def from_clustering(cls, snapshot: Snapshot) -> "Assignment":
        ap_of = np.full(snapshot.n_ues, UNASSIGNED, dtype=np.int64)
        for ue, ap in snapshot.cluster_of.items():
            ap_of[ue] = ap
        return cls(snapshot, ap_of)

    @classmethod
    def from_mapping(cls, snapshot: Snapshot, mapping: dict) -> "Assignment":
        ap_of = np.full(snapshot.n_ues, UNASSIGNED, dtype=np.int64)
        for ue, ap in mapping.items():
            ue = int(ue)
            if not 0 <= ue < snapshot.n_ues:
                raise ConfigError(f"unknown UE id {ue}")
            ap_of[ue] = UNASSIGNED if ap is None else int(ap)
        return cls(snapshot, ap_of)

    def copy(self) -> "Assignment":
        clone = object.__new__(Assignment)
        clone.snapshot = self.snapshot
        clone.ap_of = self.ap_of.copy()
        clone.load = self.load.copy()
        clone.ue_count = self.ue_count.copy()
        clone.link_blockers = self.link_blockers.copy()
        return clone

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.ap_of, other.ap_of)

    def assign(self, ue: int, ap: int) -> None:
        """Reassign one UE, updating all caches."""
        old = self.ap_of[ue]
        if old == ap:
            return
        snap = self.snapshot
        demand = snap.demands()[ue]
        if old != UNASSIGNED:
            self.load[old] -= demand
            self.ue_count[old] -= 1
        if ap != UNASSIGNED:
            self.load[ap] += demand
            self.ue_count[ap] += 1
            self.link_blockers[ue] = snap.blocker_matrix()[ue, ap]
        else:
            self.link_blockers[ue] = 0
        self.ap_of[ue] = ap

    def apply(self, move: Move) -> Move:
        """Apply a move in place; returns the inverse move."""
        if isinstance(move, Change):
            old = int(self.ap_of[move.ue])
            self.assign(move.ue, move.new_ap)
            return Change(move.ue, old)
        if isinstance(move, Swap):
            ap_a = int(self.ap_of[move.ue_a])
            ap_b = int(self.ap_of[move.ue_b])
            self.assign(move.ue_a, ap_b)
            self.assign(move.ue_b, ap_a)
            return move
        raise ConfigError(f"unknown move type {move!r}")

    def to_mapping(self) -> dict[int, int | None]:
        return {ue: (None if self.ap_of[ue] == UNASSIGNED else int(self.ap_of[ue]))
                for ue in range(self.snapshot.n_ues)}

    def to_json(self) -> str:
        return json.dumps({str(k): v for k, v in self.to_mapping().items()}, indent=0)

    @classmethod
    def from_json(cls, snapshot: Snapshot, text: str) -> "Assignment":
        return cls.from_mapping(snapshot, json.loads(text))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _validate_move(snapshot: Snapshot, assignment: Assignment, move: Move) -> None:
    if isinstance(move, Change):
        if not 0 <= move.ue < snapshot.n_ues:
            raise ConfigError(f"illegal move: unknown UE {move.ue}")
        if not 0 <= move.new_ap < snapshot.n_aps:
            raise ConfigError(f"illegal move: unknown AP {move.new_ap}")
    elif isinstance(move, Swap):
        for ue in (move.ue_a, move.ue_b):
            if not 0 <= ue < snapshot.n_ues:
                raise ConfigError(f"illegal move: unknown UE {ue}")
        if move.ue_a == move.ue_b:
            raise ConfigError("illegal move: swap of a UE with itself")
        ap_a = assignment.ap_of[move.ue_a]
        ap_b = assignment.ap_of[move.ue_b]
        if ap_a == UNASSIGNED or ap_b == UNASSIGNED:
            raise ConfigError("illegal move: swap requires both UEs assigned")
        if ap_a == ap_b:
            raise ConfigError("illegal move: swap requires distinct APs")
    else:
        raise ConfigError(f"illegal move: {move!r}")


def score_full(snapshot: Snapshot, assignment: Assignment) -> ScoreVector:
    """From-scratch evaluation; ignores the assignment's caches."""
    ap_of = assignment.ap_of
    if ((ap_of < UNASSIGNED) | (ap_of >= snapshot.n_aps)).any():
        raise ConfigError("assignment references unknown AP ids")
    assigned = ap_of != UNASSIGNED
    unassigned = int((~assigned).sum())
    if snapshot.n_ues == 0:
        return ScoreVector(0, 0, 0, 0)
    blk = snapshot.blocker_matrix()
    ue_ids = np.nonzero(assigned)[0]
    blockers = int(blk[ue_ids, ap_of[ue_ids]].sum()) if len(ue_ids) else 0
    load = np.bincount(ap_of[ue_ids], weights=snapshot.demands()[ue_ids],
                       minlength=snapshot.n_aps).astype(np.int64)
    overload = int(np.maximum(load - snapshot.capacities(), 0).sum())
    counts = np.bincount(ap_of[ue_ids], minlength=snapshot.n_aps)
    aps_used = int((counts > 0).sum())
    return ScoreVector(unassigned, blockers, overload, aps_used)


def score_delta(snapshot: Snapshot, assignment: Assignment, move: Move) -> ScoreDelta:
    """score(apply(move)) - score(assignment), in O(1) cache lookups.

    A Change onto the UE's current AP is permitted and yields a zero delta.
    """
    if isinstance(move, Change) and 0 <= move.ue < snapshot.n_ues \
            and assignment.ap_of[move.ue] == move.new_ap:
        return ScoreDelta(0, 0, 0, 0)
    _validate_move(snapshot, assignment, move)
    blk = snapshot.blocker_matrix()
    caps = snapshot.capacities()
    demands = snapshot.demands()
    load = assignment.load
    count = assignment.ue_count

    def overload_delta(ap: int, load_change: int) -> int:
        before = max(0, int(load[ap]) - int(caps[ap]))
        after = max(0, int(load[ap]) + load_change - int(caps[ap]))
        return after - before

    if isinstance(move, Change):
        ue, new = move.ue, move.new_ap
        old = int(assignment.ap_of[ue])
        d = int(demands[ue])
        d_unassigned = -1 if old == UNASSIGNED else 0
        d_blockers = int(blk[ue, new])
        d_overload = overload_delta(new, d)
        d_aps = 1 if count[new] == 0 else 0
        if old != UNASSIGNED:
            d_blockers -= int(blk[ue, old])
            d_overload += overload_delta(old, -d)
            if count[old] == 1:
                d_aps -= 1
        return ScoreDelta(d_unassigned, d_blockers, d_overload, d_aps)

    ue_a, ue_b = move.ue_a, move.ue_b
    ap_a = int(assignment.ap_of[ue_a])
    ap_b = int(assignment.ap_of[ue_b])
    d_a, d_b = int(demands[ue_a]), int(demands[ue_b])
    d_blockers = (int(blk[ue_a, ap_b]) + int(blk[ue_b, ap_a])
                  - int(blk[ue_a, ap_a]) - int(blk[ue_b, ap_b]))
    d_overload = overload_delta(ap_a, d_b - d_a) + overload_delta(ap_b, d_a - d_b)
    return ScoreDelta(0, d_blockers, d_overload, 0)


# ---------------------------------------------------------------------------
# KPI report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KPIReport:
    allocated: int
    unblocked_links: int
    links_with_1_blocker: int
    aps_used: int
    capacity_respected: int
    capacity_overloaded: int
    avg_ues_per_used_ap: float
    avg_overload_pct: float


def kpi_report(snapshot: Snapshot, assignment: Assignment) -> KPIReport:
    """Association quality indicators; respected/overloaded count used APs only."""
    ap_of = assignment.ap_of
    assigned = ap_of != UNASSIGNED
    allocated = int(assigned.sum())
    blk = assignment.link_blockers
    unblocked = int(((blk == 0) & assigned).sum())
    one_blocker = int(((blk == 1) & assigned).sum())
    used = assignment.ue_count > 0
    aps_used = int(used.sum())
    caps = snapshot.capacities()
    over = used & (assignment.load > caps)
    overloaded = int(over.sum())
    respected = int((used & ~over).sum())
    avg_ues = allocated / aps_used if aps_used else 0.0
    if overloaded:
        ratio = (assignment.load[over] - caps[over]) / caps[over]
        avg_over_pct = float(ratio.mean() * 100.0)
    else:
        avg_over_pct = 0.0
    return KPIReport(allocated, unblocked, one_blocker, aps_used,
                     respected, overloaded, avg_ues, avg_over_pct)
