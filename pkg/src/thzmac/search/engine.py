"""Search driver: budgets, traces, the solve loop, and acceptor comparison.

Two interchangeable engines run the same move distribution and acceptance
semantics: "numba" (JIT kernel, the default) and "python" (the reference
implementation built on :mod:`thzmac.search.acceptors`). Both are
deterministic per seed; they use different RNG streams, so their
trajectories differ from each other but never from themselves.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..errors import ConfigError, InvariantError
from ..scoring import (DEFAULT_ORDER, DEFAULT_WEIGHTS, Assignment, Change,
                       ScoreVector, Swap, kpi_report, order_permutation,
                       score_delta, score_full)
from ..seeding import derive_seed
from ..topology import Snapshot
from . import acceptors as acc
from ._kernel import run_chunk, seed_kernel_rng


@dataclass(frozen=True)
class Budget:
    """Exactly one of ``seconds`` or ``steps`` must be set; zero is a legal
    budget that returns the initial assignment unchanged."""

    seconds: float | None = None
    steps: int | None = None

    def validate(self) -> None:
        if (self.seconds is None) == (self.steps is None):
            raise ConfigError("budget-zero: set exactly one of seconds or steps")
        if self.seconds is not None and self.seconds < 0:
            raise ConfigError("budget seconds must be >= 0")
        if self.steps is not None and self.steps < 0:
            raise ConfigError("budget steps must be >= 0")


class TracePoint(NamedTuple):
    elapsed_s: float
    best_scalar: float
    moves_evaluated: int
    best_vector: tuple


class SearchTrace:
    """Best-score progress samples, >= 1 Hz under a seconds budget."""

    CSV_HEADER = "elapsed_s,best_score_scalar,moves_evaluated"

    def __init__(self, points: Sequence[TracePoint] = ()):
        self.points = list(points)

    def append(self, point: TracePoint) -> None:
        self.points.append(point)

    def validate(self, perm: tuple[int, ...] = (0, 1, 2, 3)) -> None:
        for prev, cur in zip(self.points, self.points[1:]):
            if cur.elapsed_s <= prev.elapsed_s:
                raise InvariantError("trace elapsed times must strictly increase")
            prev_key = tuple(prev.best_vector[i] for i in perm)
            cur_key = tuple(cur.best_vector[i] for i in perm)
            if cur_key > prev_key:
                raise InvariantError("incumbent best score must be non-increasing")

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for p in self.points:
            lines.append(f"{p.elapsed_s:.6f},{p.best_scalar:.6f},{p.moves_evaluated}")
        return "\n".join(lines) + "\n"


@dataclass
class SolveResult:
    best: Assignment
    best_score: ScoreVector
    trace: SearchTrace
    moves_evaluated: int
    elapsed_s: float
    seed: int
    acceptor: str

    @property
    def moves_per_second(self) -> float:
        return self.moves_evaluated / self.elapsed_s if self.elapsed_s > 0 else 0.0


def _weights_by_component(weights: tuple, order: tuple[str, ...]) -> tuple:
    perm = order_permutation(order)
    wcomp = [0.0] * 4
    for rank_pos, comp in enumerate(perm):
        wcomp[comp] = float(weights[rank_pos])
    return tuple(wcomp)


def _acceptor_name(cfg: acc.AcceptorConfig) -> str:
    return {acc.Tabu: "tabu", acc.SimAnneal: "sa", acc.LateAcceptance: "la",
            acc.StrategicOsc: "so"}[type(cfg)]


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def solve(snapshot: Snapshot, init: Assignment | None = None,
          acceptor: acc.AcceptorConfig | None = None,
          budget: Budget | None = None, seed: int = 0, *,
          score_order: tuple[str, ...] = DEFAULT_ORDER,
          weights: tuple = DEFAULT_WEIGHTS,
          candidate_k: int | None = None, p_change: float = 0.8,
          engine: str = "numba", target: ScoreVector | None = None,
          trace_hz: float = 4.0) -> SolveResult:
    """Local search from ``init`` (default: the snapshot's clustering).

    Samples Change/Swap moves, evaluates them incrementally, lets the
    acceptor decide, and tracks the lexicographic incumbent best. Stops at
    the budget, or earlier if ``target`` is reached. Deterministic per seed
    and engine, chunk-size independent.
    """
    if budget is None:
        raise ConfigError("budget-zero: a seconds or steps budget is required")
    budget.validate()
    if acceptor is None:
        acceptor = acc.LateAcceptance()
    acceptor.validate()
    if not 0.0 <= p_change <= 1.0:
        raise ConfigError("p_change must be in [0, 1]")
    if candidate_k is not None and candidate_k < 1:
        raise ConfigError("candidate_k must be >= 1")
    if init is None:
        init = Assignment.from_clustering(snapshot)
    name = _acceptor_name(acceptor)

    start_score = score_full(snapshot, init)
    empty_budget = (budget.steps == 0) or (budget.seconds == 0)
    if snapshot.n_ues == 0 or empty_budget:
        return SolveResult(init.copy(), start_score, SearchTrace(), 0, 0.0,
                           seed, name)
    if engine == "numba":
        return _solve_numba(snapshot, init, acceptor, budget, seed, score_order,
                            weights, candidate_k, p_change, target, trace_hz, name)
    if engine == "python":
        return _solve_python(snapshot, init, acceptor, budget, seed, score_order,
                             weights, candidate_k, p_change, target, trace_hz, name)
    raise ConfigError(f"unknown engine {engine!r}")


def _solve_one_restart(args) -> tuple[int, SolveResult]:
    index, snapshot, init, acceptor, budget, base_seed, kwargs = args
    res = solve(snapshot, init, acceptor, budget,
                seed=derive_seed(base_seed, index), **kwargs)
    return index, res


def solve_multi(snapshot: Snapshot, restarts: int = 1, jobs: int = 1,
                init: Assignment | None = None,
                acceptor: acc.AcceptorConfig | None = None,
                budget: Budget | None = None, seed: int = 0,
                **kwargs) -> SolveResult:
    """Independent seeded restarts reduced to the best result.

    Restart seeds derive deterministically from (seed, restart index), and
    ties break on the lowest index, so the outcome is identical for any
    ``jobs`` worker count.
    """
    if restarts < 1:
        raise ConfigError("restarts must be >= 1")
    if jobs < 1:
        raise ConfigError("jobs must be >= 1")
    order = kwargs.get("score_order", DEFAULT_ORDER)
    perm = order_permutation(order)
    tasks = [(i, snapshot, init, acceptor, budget, seed, kwargs)
             for i in range(restarts)]
    if jobs == 1 or restarts == 1:
        results = [_solve_one_restart(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, restarts)) as pool:
            results = list(pool.map(_solve_one_restart, tasks))
    def key(item):
        index, res = item
        t = res.best_score.as_tuple()
        return (tuple(t[i] for i in perm), index)
    return min(results, key=key)[1]


def compare_acceptors(snapshot: Snapshot, budget: Budget,
                      seeds: Iterable[int] = (0,),
                      init: Assignment | None = None,
                      **kwargs) -> dict[str, list[SolveResult]]:
    """Run all four acceptors on an identical snapshot/init/budget."""
    if init is None:
        init = Assignment.from_clustering(snapshot)
    out: dict[str, list[SolveResult]] = {}
    for name, cfg in acc.default_acceptors().items():
        out[name] = [solve(snapshot, init, cfg, budget, seed=s, **kwargs)
                     for s in seeds]
    return out


def comparison_summary(results: dict[str, list[SolveResult]],
                       snapshot: Snapshot) -> list[dict]:
    rows = []
    for name, runs in results.items():
        for res in runs:
            kpi = kpi_report(snapshot, res.best)
            rows.append({
                "acceptor": name,
                "seed": res.seed,
                "best_score": str(res.best_score.as_tuple()),
                "moves_per_second": res.moves_per_second,
                "allocated": kpi.allocated,
                "unblocked_links": kpi.unblocked_links,
                "aps_used": kpi.aps_used,
                "capacity_overloaded": kpi.capacity_overloaded,
            })
    return rows


# ---------------------------------------------------------------------------
# Numba engine
# ---------------------------------------------------------------------------

def _solve_numba(snapshot, init, acceptor, budget, seed, order, weights,
                 candidate_k, p_change, target, trace_hz, name) -> SolveResult:
    n_ue, n_ap = snapshot.n_ues, snapshot.n_aps
    perm_t = order_permutation(order)
    perm = np.array(perm_t, dtype=np.int64)
    wcomp = np.array(_weights_by_component(weights, order), dtype=np.float64)
    blk = snapshot.blocker_matrix().astype(np.int64)
    demands = snapshot.demands()
    caps = snapshot.capacities()
    rank = np.ascontiguousarray(snapshot.ap_rank_by_distance().astype(np.int64))
    cand_k = int(candidate_k) if candidate_k is not None else n_ap

    ap_of = init.ap_of.astype(np.int64).copy()
    load = init.load.copy()
    count = init.ue_count.copy()
    cur_vec = score_full(snapshot, init)
    cur = np.array(cur_vec.as_tuple(), dtype=np.int64)
    best = cur.copy()
    best_ap = ap_of.copy()
    initial_scalar = float(wcomp @ cur)

    kind = acc.acceptor_kind(acceptor)
    sa_start = sa_decay = sa_rate = 0.0
    if kind == acc.SA:
        sa_start = acceptor.start_temp if acceptor.start_temp is not None \
            else max(0.05 * abs(initial_scalar), 1e-9)
        sa_decay = acceptor.decay_per_second
        sa_rate = acceptor.steps_per_second
    la_len = acceptor.list_length if kind == acc.LA else 1
    la_ring = np.full(la_len, initial_scalar, dtype=np.float64)
    la_state_i = np.zeros(1, dtype=np.int64)
    la_state_f = np.array([initial_scalar], dtype=np.float64)
    tenure = acceptor.tenure if kind == acc.TABU else 1
    tabu_until = np.zeros(max(n_ue, 1), dtype=np.int64)
    so_factors = np.array(acceptor.weight_factors if kind == acc.SO else (1.0,),
                          dtype=np.float64)
    so_period = acceptor.period if kind == acc.SO else 1
    steps_done = np.zeros(1, dtype=np.int64)
    use_target = target is not None
    tgt = np.array(target.as_tuple() if use_target else (0, 0, 0, 0),
                   dtype=np.int64)

    seed_kernel_rng(seed % 2**32)
    trace = SearchTrace()
    moves = 0
    last_elapsed = 0.0
    start = time.perf_counter()

    def record() -> None:
        nonlocal last_elapsed
        elapsed = time.perf_counter() - start
        if elapsed <= last_elapsed:
            elapsed = last_elapsed + 1e-9
        last_elapsed = elapsed
        trace.append(TracePoint(elapsed, float(wcomp @ best), moves,
                                tuple(int(v) for v in best)))

    def call(step_n: int, wall_elapsed: float, virtual: bool) -> int:
        return run_chunk(step_n, p_change, cand_k, ap_of, load, count, blk,
                         demands, caps, rank, kind, perm, wcomp, cur, best,
                         best_ap, sa_start, sa_decay, sa_rate, virtual,
                         wall_elapsed, la_ring, la_state_i, la_state_f,
                         tabu_until, tenure, so_factors,
                         so_period, steps_done, tgt, use_target)

    if budget.steps is not None:
        remaining = budget.steps
        chunk = min(max(budget.steps // 100, 1000), 1_000_000)
        while remaining > 0:
            step_n = min(chunk, remaining)
            executed = call(step_n, 0.0, True)
            moves += executed
            remaining -= executed
            record()
            if executed < step_n:
                break
    else:
        deadline = start + budget.seconds
        chunk = 4096
        while True:
            now = time.perf_counter()
            if now >= deadline:
                break
            executed = call(chunk, now - start, False)
            moves += executed
            record()
            if executed < chunk:
                break
            elapsed = time.perf_counter() - start
            rate = moves / max(elapsed, 1e-6)
            chunk = int(min(max(rate / trace_hz, 1024), 20_000_000))

    elapsed_s = time.perf_counter() - start
    best_asg = Assignment(snapshot, best_ap)
    best_score = ScoreVector(*(int(v) for v in best))
    check = score_full(snapshot, best_asg)
    if check != best_score:
        raise InvariantError(f"kernel best score {best_score} does not match "
                             f"recomputation {check}")
    trace.validate(perm_t)
    return SolveResult(best_asg, best_score, trace, moves, elapsed_s, seed, name)


# ---------------------------------------------------------------------------
# Python reference engine
# ---------------------------------------------------------------------------

def _solve_python(snapshot, init, acceptor, budget, seed, order, weights,
                  candidate_k, p_change, target, trace_hz, name) -> SolveResult:
    n_ue, n_ap = snapshot.n_ues, snapshot.n_aps
    perm_t = order_permutation(order)
    wcomp = _weights_by_component(weights, order)
    rank = snapshot.ap_rank_by_distance()
    cand_k = int(candidate_k) if candidate_k is not None else n_ap
    k_lim = min(cand_k, n_ap)
    rng = random.Random(seed)

    asg = init.copy()
    cur = score_full(snapshot, init)
    best = cur
    best_asg = asg.copy()
    cur_scalar = sum(w * v for w, v in zip(wcomp, cur.as_tuple()))

    def key(vec: ScoreVector) -> tuple:
        t = vec.as_tuple()
        return tuple(t[i] for i in perm_t)

    kind = acc.acceptor_kind(acceptor)
    tabu = acc.TabuState(acceptor) if kind == acc.TABU else None
    sa = acc.SimAnnealState(acceptor, cur_scalar, rng) if kind == acc.SA else None
    la = acc.LateAcceptanceState(acceptor, cur_scalar) if kind == acc.LA \
        else acc.LateAcceptanceState(acc.LateAcceptance(1), cur_scalar)
    so = acc.StrategicOscState(acceptor, wcomp) if kind == acc.SO else None

    target_key = key(target) if target is not None else None
    trace = SearchTrace()
    moves = 0
    last_elapsed = 0.0
    start = time.perf_counter()
    deadline = start + budget.seconds if budget.seconds is not None else None
    max_steps = budget.steps if budget.steps is not None else None
    sa_rate = acceptor.steps_per_second if kind == acc.SA else 1e6
    trace_every = max(1, (max_steps or 100_000) // 100)

    def record() -> None:
        nonlocal last_elapsed
        elapsed = time.perf_counter() - start
        if elapsed <= last_elapsed:
            elapsed = last_elapsed + 1e-9
        last_elapsed = elapsed
        scalar = sum(w * v for w, v in zip(wcomp, best.as_tuple()))
        trace.append(TracePoint(elapsed, float(scalar), moves, best.as_tuple()))

    step = 0
    while True:
        if max_steps is not None and step >= max_steps:
            break
        if deadline is not None and time.perf_counter() >= deadline:
            break
        step += 1
        moves += 1
        if tabu is not None:
            tabu.on_step()

        move = None
        move_ues: tuple[int, ...] = ()
        if rng.random() < p_change:
            ue = rng.randrange(n_ue)
            idx = rng.randrange(k_lim)
            new_ap = int(rank[ue, idx])
            if new_ap == asg.ap_of[ue]:
                idx = (idx + 1) % k_lim
                new_ap = int(rank[ue, idx])
            if new_ap != asg.ap_of[ue]:
                move = Change(ue, new_ap)
                move_ues = (ue,)
        else:
            a = rng.randrange(n_ue)
            b = rng.randrange(n_ue)
            if a != b and asg.ap_of[a] >= 0 and asg.ap_of[b] >= 0 \
                    and asg.ap_of[a] != asg.ap_of[b]:
                move = Swap(a, b)
                move_ues = (a, b)

        accepted = False
        if move is not None:
            delta = score_delta(snapshot, asg, move)
            candidate = cur + delta
            scalar_delta = sum(w * v for w, v in zip(wcomp, delta))
            if kind == acc.TABU:
                accepted = tabu.accept(move_ues, key(candidate), key(best))
            elif kind == acc.SA:
                if budget.steps is not None:
                    elapsed = step / sa_rate
                else:
                    elapsed = time.perf_counter() - start
                accepted = sa.accept(scalar_delta, elapsed)
            elif kind == acc.LA:
                accepted = la.accept(cur_scalar + scalar_delta)
            else:
                accepted = so.accept(delta, step - 1)
            if accepted:
                asg.apply(move)
                cur = candidate
                cur_scalar += scalar_delta
                if tabu is not None:
                    tabu.on_accept(move_ues)
                if key(cur) < key(best):
                    best = cur
                    best_asg = asg.copy()
        la.on_step(accepted, cur_scalar)
        if target_key is not None and key(best) <= target_key:
            break
        if step % trace_every == 0:
            record()

    record()
    elapsed_s = time.perf_counter() - start
    trace.validate(perm_t)
    return SolveResult(best_asg, best, trace, moves, elapsed_s, seed, name)
