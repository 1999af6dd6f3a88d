"""Offline/online orchestration of the solve -> label -> learn loop.

Offline: generate snapshots, solve each, distill the solutions into a
labeled dataset, split, train, validate. Online: predict associations for
incoming snapshots, monitor against a short reference solve, and retrain
on the snapshots the model handles poorly.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .labeling import RelativeLabel, resolve_label_to_ap
from .learn import (Dataset, EvalReport, Model, build_training_set, evaluate,
                    featurize, kfold_accuracy, stratified_split,
                    train_classifier)
from .learn.data import FEATURE_NAMES
from .scoring import Assignment, KPIReport, kpi_report
from .search import Budget, solve
from .search.acceptors import AcceptorConfig, LateAcceptance
from .seeding import derive_seed
from .topology import Snapshot, SnapshotConfig, generate_snapshot


@dataclass(frozen=True)
class RetrainThresholds:
    """Retrain when match rate drops below ``min_match_rate`` or the blocked
    fraction of predicted links exceeds ``max_blocked_frac``."""

    min_match_rate: float = 0.8
    max_blocked_frac: float = 0.1

    def validate(self) -> None:
        for name, v in (("min_match_rate", self.min_match_rate),
                        ("max_blocked_frac", self.max_blocked_frac)):
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")


# Association mimicry wants trees deep enough to memorize per-snapshot AP
# identities; the capacity decile is snapshot-relative, so shallow trees
# blur its boundaries.
DEFAULT_MODEL_HYPER = {"max_depth": 25, "min_samples_leaf": 1}


@dataclass(frozen=True)
class PipelineConfig:
    snapshot: SnapshotConfig = SnapshotConfig(area_km2=0.1, n_aps=10, n_ues=40)
    snapshot_count: int = 20
    solver_budget: Budget = Budget(steps=30_000)
    acceptor: AcceptorConfig = LateAcceptance()
    model_kind: str = "dt"
    model_hyper: dict | None = field(default_factory=lambda: dict(DEFAULT_MODEL_HYPER))
    train_frac: float = 0.95
    retrain_thresholds: RetrainThresholds = RetrainThresholds()
    nearest_k: int | None = None   # None: featurize against all APs
    kfold: int = 10                # 0 disables the fold std-dev report
    seed: int = 0

    def validate(self) -> None:
        if self.snapshot_count < 1:
            raise ConfigError("snapshot_count must be >= 1")
        if self.nearest_k is not None and self.nearest_k < 1:
            raise ConfigError("nearest_k must be >= 1")
        self.retrain_thresholds.validate()
        self.solver_budget.validate()


@dataclass
class OfflineResult:
    model: Model
    report: EvalReport
    dataset: Dataset
    train: Dataset
    validation: Dataset
    solved: list[tuple[Snapshot, Assignment]]


def run_offline(config: PipelineConfig,
                seeds: Sequence[int] | None = None) -> OfflineResult:
    """Generate, solve, label, split, train, and validate."""
    config.validate()
    if seeds is None:
        seeds = [derive_seed(config.seed, 0, i)
                 for i in range(config.snapshot_count)]
    seeds = list(seeds)
    if len(seeds) != config.snapshot_count:
        raise ConfigError("need one snapshot seed per snapshot")

    solved = []
    for s in seeds:
        snapshot = generate_snapshot(replace(config.snapshot, seed=s))
        result = solve(snapshot, Assignment.from_clustering(snapshot),
                       config.acceptor, config.solver_budget, seed=s)
        solved.append((snapshot, result.best))

    dataset = build_training_set(solved)
    train, validation = stratified_split(dataset, config.train_frac,
                                         seed=derive_seed(config.seed, 1))
    model = train_classifier(config.model_kind, train,
                             hyper=config.model_hyper,
                             seed=derive_seed(config.seed, 2))
    report = evaluate(model, validation) if len(validation) else \
        evaluate(model, train)
    if config.kfold and len(dataset) >= config.kfold:
        _, std, _ = kfold_accuracy(config.model_kind, dataset, k=config.kfold,
                                   seed=derive_seed(config.seed, 3),
                                   hyper=config.model_hyper)
        report.std_dev_over_folds = std
    return OfflineResult(model, report, dataset, train, validation, solved)


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------

def predict_association(model: Model, snapshot: Snapshot,
                        nearest_k: int | None = None) -> Assignment:
    """Predict a complete assignment, one UE at a time in id order.

    Each UE is featurized against its candidate APs (all, or the nearest
    k); the most frequent predicted label wins, ties resolving to the label
    of the nearest candidate that predicted one of the tied labels. The
    label is then mapped back to an AP under the running partial loads.
    Never leaves a UE unassigned.
    """
    if nearest_k is not None and nearest_k < 1:
        raise ConfigError("nearest_k must be >= 1")
    assignment = Assignment(snapshot)
    if snapshot.n_aps == 0:
        raise ConfigError("cannot associate in a snapshot without APs")
    rank = snapshot.ap_rank_by_distance()
    k = snapshot.n_aps if nearest_k is None else min(nearest_k, snapshot.n_aps)
    for ue in range(snapshot.n_ues):
        candidates = [int(a) for a in rank[ue, :k]]
        rows = np.stack([featurize(ue, ap, snapshot, assignment.load)
                         for ap in candidates])
        labels = [str(p) for p in model.predict(rows)]
        counts = Counter(labels)
        top = max(counts.values())
        tied = {label for label, c in counts.items() if c == top}
        winner = next(label for label in labels if label in tied)
        ap = resolve_label_to_ap(ue, RelativeLabel.parse(winner), snapshot,
                                 assignment)
        assignment.assign(ue, ap)
    return assignment


# ---------------------------------------------------------------------------
# Online monitoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OnlineEvent:
    snapshot_id: int
    match_rate: float
    blocked_frac: float
    retrained: bool
    kpi: KPIReport

    def to_json(self) -> str:
        return json.dumps({
            "snapshotId": self.snapshot_id,
            "matchRate": self.match_rate,
            "blockedFrac": self.blocked_frac,
            "retrained": self.retrained,
            "kpi": self.kpi.__dict__,
        })


@dataclass
class OnlineResult:
    events: list[OnlineEvent]
    model: Model
    dataset: Dataset


def run_online(model: Model, snapshots: Iterable[Snapshot],
               thresholds: RetrainThresholds,
               base_dataset: Dataset | None = None,
               model_kind: str = "dt", model_hyper: dict | None = None,
               reference_acceptor: AcceptorConfig | None = None,
               reference_budget: Budget | None = None,
               nearest_k: int | None = None, seed: int = 0) -> OnlineResult:
    """Predict each snapshot, compare to a short reference solve, and
    retrain on the full accumulated dataset whenever a threshold trips.
    The retrained model serves all subsequent snapshots.
    """
    thresholds.validate()
    if reference_acceptor is None:
        reference_acceptor = LateAcceptance()
    if reference_budget is None:
        reference_budget = Budget(seconds=1.0)
    dataset = base_dataset if base_dataset is not None \
        else Dataset(FEATURE_NAMES, np.zeros((0, len(FEATURE_NAMES))), [])

    events: list[OnlineEvent] = []
    for i, snapshot in enumerate(snapshots):
        predicted = predict_association(model, snapshot, nearest_k)
        reference = solve(snapshot, Assignment.from_clustering(snapshot),
                          reference_acceptor, reference_budget,
                          seed=derive_seed(seed, 10, i))
        n = snapshot.n_ues
        if n:
            match_rate = float((predicted.ap_of == reference.best.ap_of).mean())
            blocked_frac = float((predicted.link_blockers >= 1).mean())
        else:
            match_rate, blocked_frac = 1.0, 0.0
        retrain = (match_rate < thresholds.min_match_rate
                   or blocked_frac > thresholds.max_blocked_frac)
        if retrain:
            dataset = dataset.concat(build_training_set(
                [(snapshot, reference.best)]))
            model = train_classifier(model_kind, dataset, hyper=model_hyper,
                                     seed=derive_seed(seed, 11, i))
        events.append(OnlineEvent(i, match_rate, blocked_frac, retrain,
                                  kpi_report(snapshot, predicted)))
    return OnlineResult(events, model, dataset)
