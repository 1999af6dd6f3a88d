"""Command-line interface.

Every command routes its randomness through an explicit ``--seed``, writes
data to the paths it was given, and drops a manifest with input/output
digests next to its primary output. Exit codes: 0 success, 2 configuration
error, 3 I/O error, 4 invariant violation.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import click

from . import __version__
from . import beamsim, lospredict, report as report_mod
from .errors import ConfigError, InvariantError
from .learn import (Dataset, evaluate, kfold_accuracy, load_model,
                    predict_latency_bench, save_model, train_classifier)
from .manifest import write_manifest
from .pipeline import (PipelineConfig, RetrainThresholds, predict_association,
                       run_offline, run_online)
from .scoring import Assignment, ScoreVector, LEVELS
from .search import Budget, compare_acceptors, comparison_summary, solve_multi
from .search.acceptors import ACCEPTOR_NAMES, acceptor_by_name
from .topology import Snapshot, SnapshotConfig, generate_snapshot

BIG = 10**15  # stands in for an unbounded score-vector component


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ConfigError(f"expected a lo:hi range, got {text!r}") from None


def _parse_kv(pairs: tuple[str, ...]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def _parse_target(text: str | None) -> ScoreVector | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError("target score needs 4 comma-separated values "
                          "(use * for unbounded)")
    vals = [BIG if p.strip() == "*" else int(p) for p in parts]
    return ScoreVector(*vals)


def _load_snapshot(path) -> Snapshot:
    return Snapshot.from_json(Path(path).read_text())


def _budget(seconds, steps) -> Budget:
    if (seconds is None) == (steps is None):
        raise ConfigError("set exactly one of --seconds or --steps")
    return Budget(seconds=seconds, steps=steps)


class _Run:
    """Times a command and collects files for its manifest."""

    def __init__(self, command: str, config: dict, seeds: list[int]):
        self.command = command
        self.config = config
        self.seeds = seeds
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.t0 = time.perf_counter()

    def reads(self, *paths) -> None:
        self.inputs.extend(str(p) for p in paths)

    def writes(self, *paths) -> None:
        self.outputs.extend(str(p) for p in paths)

    def finish(self, primary) -> None:
        write_manifest(primary, self.command, self.config, self.seeds,
                       self.inputs, self.outputs,
                       time.perf_counter() - self.t0)


@click.group()
@click.version_option(__version__, prog_name="thzmac")
@click.option("--config", "config_path", default=None,
              help="JSON file of per-command option defaults; flags override.")
@click.pass_context
def cli(ctx, config_path):
    if config_path:
        ctx.default_map = json.loads(Path(config_path).read_text())


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------

@cli.command("gen-snapshot")
@click.option("--ues", type=int, required=True)
@click.option("--aps", type=int, required=True)
@click.option("--area-km2", type=float, default=1.0, show_default=True)
@click.option("--capacity-range", default="50:150", show_default=True)
@click.option("--demand-range", default="5:20", show_default=True)
@click.option("--blocker-radius", type=float, default=1.0, show_default=True)
@click.option("--poisson", is_flag=True,
              help="Draw the node counts from Poisson processes with the "
                   "given means instead of fixing them.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True)
def gen_snapshot(ues, aps, area_km2, capacity_range, demand_range,
                 blocker_radius, poisson, seed, out_path):
    """Generate one network snapshot and write it as JSON."""
    cfg = SnapshotConfig(area_km2=area_km2, n_aps=aps, n_ues=ues,
                         capacity_range=_parse_range(capacity_range),
                         demand_range=_parse_range(demand_range),
                         blocker_radius=blocker_radius, seed=seed,
                         poisson=poisson)
    run = _Run("gen-snapshot", {"ues": ues, "aps": aps, "areaKm2": area_km2,
                                "capacityRange": capacity_range,
                                "demandRange": demand_range,
                                "blockerRadius": blocker_radius,
                                "poisson": poisson}, [seed])
    snapshot = generate_snapshot(cfg)
    Path(out_path).write_text(snapshot.to_json())
    run.writes(out_path)
    run.finish(out_path)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------

@cli.command("solve")
@click.option("--snapshot", "snapshot_path", required=True)
@click.option("--acceptor", type=click.Choice(sorted(ACCEPTOR_NAMES)),
              default="la", show_default=True)
@click.option("--acceptor-arg", multiple=True,
              help="Override an acceptor field, e.g. tenure=5 or "
                   "list_length=200. Repeatable.")
@click.option("--seconds", type=float, default=None)
@click.option("--steps", type=int, default=None)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True)
@click.option("--trace", "trace_path", default=None)
@click.option("--restarts", type=int, default=1, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--candidate-k", type=int, default=None)
@click.option("--score-order", default=None,
              help=f"Comma-separated permutation of {','.join(LEVELS)}.")
@click.option("--target-score", default=None,
              help="Stop early once the best score is <= this vector "
                   "(4 comma values, * = unbounded).")
@click.option("--engine", type=click.Choice(["numba", "python"]),
              default="numba", show_default=True)
def solve_cmd(snapshot_path, acceptor, acceptor_arg, seconds, steps, seed,
              out_path, trace_path, restarts, jobs, candidate_k, score_order,
              target_score, engine):
    """Run the local search on a snapshot and write the best assignment."""
    budget = _budget(seconds, steps)
    cfg = replace(acceptor_by_name(acceptor), **_parse_kv(acceptor_arg))
    order = tuple(score_order.split(",")) if score_order else LEVELS
    run = _Run("solve", {"snapshot": snapshot_path, "acceptor": acceptor,
                         "acceptorArgs": _parse_kv(acceptor_arg),
                         "seconds": seconds, "steps": steps,
                         "restarts": restarts, "jobs": jobs,
                         "candidateK": candidate_k,
                         "scoreOrder": list(order),
                         "targetScore": target_score,
                         "engine": engine}, [seed])
    snapshot = _load_snapshot(snapshot_path)
    run.reads(snapshot_path)
    result = solve_multi(snapshot, restarts=restarts, jobs=jobs,
                         acceptor=cfg, budget=budget, seed=seed,
                         score_order=order, candidate_k=candidate_k,
                         target=_parse_target(target_score), engine=engine)
    Path(out_path).write_text(result.best.to_json())
    run.writes(out_path)
    if trace_path:
        Path(trace_path).write_text(result.trace.to_csv())
        run.writes(trace_path)
    click.echo(f"best score {result.best_score.as_tuple()} after "
               f"{result.moves_evaluated} moves", err=True)
    run.finish(out_path)


@cli.command("compare-acceptors")
@click.option("--snapshot", "snapshot_path", required=True)
@click.option("--seconds", type=float, default=None)
@click.option("--steps", type=int, default=None)
@click.option("--seed", type=int, required=True)
@click.option("--runs", type=int, default=1, show_default=True,
              help="Seeded runs per acceptor (seeds are seed..seed+runs-1).")
@click.option("--out-dir", "out_dir", required=True)
def compare_cmd(snapshot_path, seconds, steps, seed, runs, out_dir):
    """Run all four acceptors on one snapshot; write traces and a summary."""
    budget = _budget(seconds, steps)
    run = _Run("compare-acceptors", {"snapshot": snapshot_path,
                                     "seconds": seconds, "steps": steps,
                                     "runs": runs}, [seed])
    snapshot = _load_snapshot(snapshot_path)
    run.reads(snapshot_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = compare_acceptors(snapshot, budget,
                                seeds=range(seed, seed + runs))
    trace_path = out / "traces.csv"
    with open(trace_path, "w") as fh:
        fh.write("acceptor,seed,elapsed_s,best_score_scalar,moves_evaluated\n")
        for name, solves in results.items():
            for res in solves:
                for p in res.trace.points:
                    fh.write(f"{name},{res.seed},{p.elapsed_s:.6f},"
                             f"{p.best_scalar:.6f},{p.moves_evaluated}\n")
    summary_path = out / "summary.csv"
    rows = comparison_summary(results, snapshot)
    with open(summary_path, "w") as fh:
        cols = list(rows[0].keys())
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(str(row[c]) for c in cols) + "\n")
    run.writes(trace_path, summary_path)
    run.finish(out / "comparison")


# ---------------------------------------------------------------------------
# Learning
# ---------------------------------------------------------------------------

@cli.command("build-dataset")
@click.option("--snapshot", "snapshot_paths", multiple=True, required=True)
@click.option("--assignment", "assignment_paths", multiple=True, required=True)
@click.option("--out", "out_path", required=True)
def build_dataset_cmd(snapshot_paths, assignment_paths, out_path):
    """Assemble a labeled dataset from solved (snapshot, assignment) pairs."""
    if len(snapshot_paths) != len(assignment_paths):
        raise ConfigError("need one --assignment per --snapshot")
    from .learn import build_training_set
    run = _Run("build-dataset", {"pairs": len(snapshot_paths)}, [])
    solved = []
    for spath, apath in zip(snapshot_paths, assignment_paths):
        snapshot = _load_snapshot(spath)
        assignment = Assignment.from_json(snapshot, Path(apath).read_text())
        solved.append((snapshot, assignment))
        run.reads(spath, apath)
    dataset = build_training_set(solved)
    dataset.to_csv(out_path)
    run.writes(out_path)
    run.finish(out_path)


@cli.command("train")
@click.option("--data", "data_path", required=True)
@click.option("--model", "kind", type=click.Choice(["dt", "rf", "gbt", "nb"]),
              required=True)
@click.option("--hyper", multiple=True,
              help="Constructor override, e.g. max_depth=20. Repeatable.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True)
def train_cmd(data_path, kind, hyper, seed, out_path):
    """Train a classifier on a dataset CSV and write the model file."""
    run = _Run("train", {"data": data_path, "model": kind,
                         "hyper": _parse_kv(hyper)}, [seed])
    dataset = Dataset.from_csv(data_path)
    run.reads(data_path)
    model = train_classifier(kind, dataset, hyper=_parse_kv(hyper) or None,
                             seed=seed)
    save_model(model, out_path)
    run.writes(out_path)
    run.finish(out_path)


@cli.command("evaluate")
@click.option("--model", "model_path", required=True)
@click.option("--data", "data_path", required=True)
@click.option("--report", "report_path", required=True)
@click.option("--kfold", type=int, default=0, show_default=True,
              help="Also report the accuracy std-dev over k folds "
                   "(retrains the model kind with default settings).")
@click.option("--seed", type=int, default=0, show_default=True)
def evaluate_cmd(model_path, data_path, report_path, kfold, seed):
    """Evaluate a model file on a dataset CSV; write a JSON report."""
    run = _Run("evaluate", {"model": model_path, "data": data_path,
                            "kfold": kfold}, [seed])
    model = load_model(model_path)
    dataset = Dataset.from_csv(data_path)
    run.reads(model_path, data_path)
    rep = evaluate(model, dataset)
    if kfold:
        _, std, _ = kfold_accuracy(model.kind, dataset, k=kfold, seed=seed)
        rep.std_dev_over_folds = std
    Path(report_path).write_text(json.dumps(rep.to_dict(), indent=1))
    run.writes(report_path)
    run.finish(report_path)


@cli.command("predict")
@click.option("--model", "model_path", required=True)
@click.option("--snapshot", "snapshot_path", required=True)
@click.option("--nearest-k", type=int, default=None,
              help="Score only the k nearest APs per UE (default: all).")
@click.option("--out", "out_path", required=True)
def predict_cmd(model_path, snapshot_path, nearest_k, out_path):
    """Predict a full association for a snapshot with a trained model."""
    run = _Run("predict", {"model": model_path, "snapshot": snapshot_path,
                           "nearestK": nearest_k}, [])
    model = load_model(model_path)
    snapshot = _load_snapshot(snapshot_path)
    run.reads(model_path, snapshot_path)
    assignment = predict_association(model, snapshot, nearest_k)
    Path(out_path).write_text(assignment.to_json())
    run.writes(out_path)
    run.finish(out_path)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def _pipeline_config(doc: dict) -> PipelineConfig:
    snapshot = SnapshotConfig(**doc.get("snapshot", {}))
    budget_doc = doc.get("budget", {"steps": 30000})
    acceptor = replace(acceptor_by_name(doc.get("acceptor", "la")),
                       **doc.get("acceptorArgs", {}))
    thresholds = RetrainThresholds(**doc.get("retrainThresholds", {}))
    return PipelineConfig(
        snapshot=snapshot,
        snapshot_count=doc.get("snapshotCount", 20),
        solver_budget=Budget(seconds=budget_doc.get("seconds"),
                             steps=budget_doc.get("steps")),
        acceptor=acceptor,
        model_kind=doc.get("modelKind", "dt"),
        model_hyper=doc.get("modelHyper",
                            PipelineConfig().model_hyper),
        train_frac=doc.get("trainFrac", 0.95),
        retrain_thresholds=thresholds,
        nearest_k=doc.get("nearestK"),
        kfold=doc.get("kfold", 10),
        seed=doc.get("seed", 0),
    )


@cli.group()
def pipeline():
    """Offline training and online monitoring."""


@pipeline.command("offline")
@click.option("--config", "config_path", required=True,
              help="Pipeline JSON config (snapshot, budget, model, seed).")
@click.option("--out-dir", "out_dir", required=True)
def pipeline_offline(config_path, out_dir):
    """Generate+solve snapshots, train the mimic, write model and report."""
    doc = json.loads(Path(config_path).read_text())
    cfg = _pipeline_config(doc)
    run = _Run("pipeline offline", doc, [cfg.seed])
    run.reads(config_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_offline(cfg)
    model_path = out / "model.json"
    save_model(result.model, model_path)
    data_path = out / "dataset.csv"
    result.dataset.to_csv(data_path)
    report_path = out / "report.json"
    report_path.write_text(json.dumps(result.report.to_dict(), indent=1))
    run.writes(model_path, data_path, report_path)
    click.echo(f"validation accuracy {result.report.accuracy:.4f}", err=True)
    run.finish(out / "offline")


@pipeline.command("online")
@click.option("--model", "model_path", required=True)
@click.option("--watch", "watch_dir", required=True,
              help="Directory of snapshot JSON files, processed in name order.")
@click.option("--log", "log_path", required=True)
@click.option("--data", "data_path", default=None,
              help="Base dataset CSV to grow on retrain.")
@click.option("--min-match-rate", type=float, default=0.8, show_default=True)
@click.option("--max-blocked-frac", type=float, default=0.1, show_default=True)
@click.option("--model-kind", default="dt", show_default=True)
@click.option("--ref-seconds", type=float, default=None)
@click.option("--ref-steps", type=int, default=None)
@click.option("--nearest-k", type=int, default=None)
@click.option("--seed", type=int, required=True)
@click.option("--out-model", "out_model", default=None,
              help="Where to write the final (possibly retrained) model.")
def pipeline_online(model_path, watch_dir, log_path, data_path,
                    min_match_rate, max_blocked_frac, model_kind,
                    ref_seconds, ref_steps, nearest_k, seed, out_model):
    """Predict snapshots from a directory, monitor, retrain when poor."""
    run = _Run("pipeline online", {"model": model_path, "watch": watch_dir,
                                   "minMatchRate": min_match_rate,
                                   "maxBlockedFrac": max_blocked_frac,
                                   "modelKind": model_kind,
                                   "refSeconds": ref_seconds,
                                   "refSteps": ref_steps,
                                   "nearestK": nearest_k}, [seed])
    model = load_model(model_path)
    run.reads(model_path)
    base = None
    if data_path:
        base = Dataset.from_csv(data_path)
        run.reads(data_path)
    paths = sorted(p for p in Path(watch_dir).glob("*.json")
                   if not p.name.endswith(".manifest.json"))
    snapshots = []
    for p in paths:
        snapshots.append(Snapshot.from_json(p.read_text()))
        run.reads(p)
    if ref_seconds is not None and ref_steps is not None:
        raise ConfigError("set at most one of --ref-seconds or --ref-steps")
    if ref_seconds is None and ref_steps is None:
        ref_seconds = 1.0
    budget = Budget(seconds=ref_seconds, steps=ref_steps)
    result = run_online(model, snapshots,
                        RetrainThresholds(min_match_rate, max_blocked_frac),
                        base_dataset=base, model_kind=model_kind,
                        reference_budget=budget, nearest_k=nearest_k,
                        seed=seed)
    with open(log_path, "w") as fh:
        for event in result.events:
            fh.write(event.to_json() + "\n")
    run.writes(log_path)
    if out_model:
        save_model(result.model, out_model)
        run.writes(out_model)
    run.finish(log_path)


# ---------------------------------------------------------------------------
# Beam simulation
# ---------------------------------------------------------------------------

@cli.command("beam-sim")
@click.option("--antennas", type=int, default=8, show_default=True)
@click.option("--beams", type=int, default=None,
              help="Codebook size (default: 2x antennas).")
@click.option("--ues", type=int, default=5, show_default=True)
@click.option("--shared/--distinct", "shared", default=True,
              help="Allow several UEs on one beam, or force distinct beams.")
@click.option("--agent", type=click.Choice(sorted(beamsim.AGENT_KINDS)),
              default="pg", show_default=True)
@click.option("--episodes", type=int, default=300, show_default=True)
@click.option("--episode-length", type=int, default=20, show_default=True)
@click.option("--step-sigma", type=float, default=2.0, show_default=True)
@click.option("--cluster-sigma", type=float, default=None,
              help="Spawn UEs clustered with this spread (default: uniform).")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True)
def beam_sim(antennas, beams, ues, shared, agent, episodes, episode_length,
             step_sigma, cluster_sigma, seed, out_path):
    """Run beam-selection episodes and write the reward curve CSV."""
    cfg = beamsim.BeamEnvConfig(n_antennas=antennas, n_beams=beams, n_ues=ues,
                                allow_shared_beam=shared,
                                episode_length=episode_length,
                                ue_step_sigma=step_sigma,
                                cluster_spawn_sigma=cluster_sigma)
    run = _Run("beam-sim", {"antennas": antennas, "beams": cfg.beams,
                            "ues": ues, "shared": shared, "agent": agent,
                            "episodes": episodes,
                            "episodeLength": episode_length}, [seed])
    stats = beamsim.run_episodes(agent, cfg, episodes, seed=seed)
    Path(out_path).write_text(beamsim.episodes_to_csv(stats))
    run.writes(out_path)
    run.finish(out_path)


# ---------------------------------------------------------------------------
# LoS prediction
# ---------------------------------------------------------------------------

@cli.group()
def los():
    """Synthetic LoS/NLoS scenes and channel classification."""


@los.command("gen")
@click.option("--obstacles", type=int, default=12, show_default=True)
@click.option("--size-range", default="5:25", show_default=True,
              help="Obstacle side-length range lo:hi in meters.")
@click.option("--route-m", type=float, default=400.0, show_default=True)
@click.option("--step-m", type=float, default=1.0, show_default=True)
@click.option("--noise", type=float, default=1.0, show_default=True)
@click.option("--scene-m", type=float, default=200.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True)
def los_gen(obstacles, size_range, route_m, step_m, noise, scene_m, seed,
            out_path):
    """Generate per-step path records along one synthetic route."""
    lo, hi = _parse_range(size_range)
    cfg = lospredict.SceneConfig(n_obstacles=obstacles,
                                 obstacle_size_range=(float(lo), float(hi)),
                                 route_length_m=route_m, step_m=step_m,
                                 noise_sigma=noise, seed=seed,
                                 scene_size_m=scene_m)
    run = _Run("los gen", {"obstacles": obstacles, "sizeRange": size_range,
                           "routeM": route_m, "stepM": step_m,
                           "noise": noise, "sceneM": scene_m}, [seed])
    records, _ = lospredict.generate_scene(cfg)
    lospredict.records_to_csv(records, out_path)
    run.writes(out_path)
    run.finish(out_path)


@los.command("aggregate")
@click.option("--data", "data_path", required=True)
@click.option("--window", type=int, required=True)
@click.option("--out", "out_path", required=True)
def los_aggregate(data_path, window, out_path):
    """Windowed mean/spread aggregation of a fine-granular path CSV."""
    run = _Run("los aggregate", {"data": data_path, "window": window}, [])
    dataset = Dataset.from_csv(data_path)
    run.reads(data_path)
    records = []
    for i in range(len(dataset)):
        x = dataset.X[i]
        records.append(lospredict.PathRecord(
            *[float(v) for v in x[:8]], (x[8], x[9]), (x[10], x[11]),
            dataset.y[i] == lospredict.LOS_LABEL))
    aggs = lospredict.aggregate(records, window)
    lospredict.aggregates_to_dataset(aggs).to_csv(out_path)
    run.writes(out_path)
    run.finish(out_path)


@los.command("compare")
@click.option("--data", "data_path", required=True)
@click.option("--models", default="dt,rf,nb", show_default=True)
@click.option("--train-frac", type=float, default=0.8, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--report", "report_path", required=True)
def los_compare(data_path, models, train_frac, seed, report_path):
    """Train the requested families on a path CSV; write the ranked table."""
    run = _Run("los compare", {"data": data_path, "models": models,
                               "trainFrac": train_frac}, [seed])
    dataset = Dataset.from_csv(data_path)
    run.reads(data_path)
    rows = lospredict.train_los_models(dataset, models.split(","), seed=seed,
                                       train_frac=train_frac)
    lospredict.comparison_to_csv(rows, report_path)
    run.writes(report_path)
    run.finish(report_path)


# ---------------------------------------------------------------------------
# Benchmarks and reports
# ---------------------------------------------------------------------------

@cli.command("bench-latency")
@click.option("--model", "model_path", required=True)
@click.option("--snapshot", "snapshot_path", required=True)
@click.option("--reps", type=int, default=50, show_default=True)
@click.option("--nearest-k", type=int, default=3, show_default=True)
@click.option("--out", "out_path", required=True)
def bench_latency(model_path, snapshot_path, reps, nearest_k, out_path):
    """Measure prediction latency medians; wall-clock, not reproducible."""
    run = _Run("bench-latency", {"model": model_path,
                                 "snapshot": snapshot_path, "reps": reps,
                                 "nearestK": nearest_k}, [])
    model = load_model(model_path)
    snapshot = _load_snapshot(snapshot_path)
    run.reads(model_path, snapshot_path)
    bench = predict_latency_bench(model, snapshot, repetitions=reps,
                                  nearest_k=nearest_k)
    with open(out_path, "w") as fh:
        fh.write("metric,milliseconds\n")
        for key in ("msPerDataPoint", "msPerUEAllAPs", "msPerUENearestK"):
            fh.write(f"{key},{bench[key]:.6f}\n")
    run.writes(out_path)
    run.finish(out_path)


@cli.command("report")
@click.option("--snapshot", "snapshot_path", required=True)
@click.option("--solver", "solver_path", required=True)
@click.option("--ml", "ml_path", default=None,
              help="Second assignment; omitted = single-row KPI CSV.")
@click.option("--out", "out_path", required=True)
def report_cmd(snapshot_path, solver_path, ml_path, out_path):
    """KPI comparison table (or single-assignment KPI row)."""
    run = _Run("report", {"snapshot": snapshot_path, "solver": solver_path,
                          "ml": ml_path}, [])
    snapshot = _load_snapshot(snapshot_path)
    solver_asg = Assignment.from_json(snapshot, Path(solver_path).read_text())
    run.reads(snapshot_path, solver_path)
    if ml_path:
        ml_asg = Assignment.from_json(snapshot, Path(ml_path).read_text())
        run.reads(ml_path)
        text = report_mod.table1(snapshot, solver_asg, ml_asg)
    else:
        text = report_mod.kpi_csv(snapshot, solver_asg)
    Path(out_path).write_text(text)
    run.writes(out_path)
    run.finish(out_path)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 2
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except InvariantError as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        return 4
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
