"""Acceptance rules for the local-search engine.

Four pluggable acceptors: tabu (TS), simulated annealing (SA), late
acceptance (LA), and strategic oscillation (SO). Configs are frozen value
objects; the matching *State classes hold the per-run mutable state and
implement the accept decision. The fast kernel mirrors these semantics;
these classes are the reference implementation and the unit-test surface.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Union

from ..errors import ConfigError
from ..scoring import ScoreDelta

TABU, SA, LA, SO = range(4)


@dataclass(frozen=True)
class Tabu:
    tenure: int = 7

    def validate(self):
        if self.tenure < 1:
            raise ConfigError("tabu tenure must be >= 1")


@dataclass(frozen=True)
class SimAnneal:
    """``start_temp=None`` auto-scales to 0.05x the initial scalar score.

    Temperature decays per wall-clock second under a seconds budget; under
    a steps budget a virtual clock of ``steps_per_second`` steps per second
    keeps runs bit-reproducible.
    """

    start_temp: float | None = None
    decay_per_second: float = 0.8
    steps_per_second: float = 1e6

    def validate(self):
        if self.start_temp is not None and self.start_temp <= 0:
            raise ConfigError("SA start_temp must be positive")
        if not 0 < self.decay_per_second <= 1:
            raise ConfigError("SA decay_per_second must be in (0, 1]")
        if self.steps_per_second <= 0:
            raise ConfigError("SA steps_per_second must be positive")


@dataclass(frozen=True)
class LateAcceptance:
    list_length: int = 400

    def validate(self):
        if self.list_length < 1:
            raise ConfigError("late-acceptance list length must be >= 1")


@dataclass(frozen=True)
class StrategicOsc:
    period: int = 2000
    weight_factors: tuple[float, ...] = (0.25, 1.0, 4.0)

    def validate(self):
        if self.period < 1:
            raise ConfigError("oscillation period must be >= 1")
        if not self.weight_factors or any(f <= 0 for f in self.weight_factors):
            raise ConfigError("weight factors must be positive and non-empty")


AcceptorConfig = Union[Tabu, SimAnneal, LateAcceptance, StrategicOsc]

ACCEPTOR_NAMES = {"tabu": Tabu, "sa": SimAnneal, "la": LateAcceptance,
                  "so": StrategicOsc}


def acceptor_by_name(name: str) -> AcceptorConfig:
    try:
        return ACCEPTOR_NAMES[name]()
    except KeyError:
        raise ConfigError(f"unknown acceptor {name!r}; choose from "
                          f"{sorted(ACCEPTOR_NAMES)}") from None


def default_acceptors() -> dict[str, AcceptorConfig]:
    return {name: cls() for name, cls in ACCEPTOR_NAMES.items()}


def acceptor_kind(cfg: AcceptorConfig) -> int:
    return {Tabu: TABU, SimAnneal: SA, LateAcceptance: LA,
            StrategicOsc: SO}[type(cfg)]


# ---------------------------------------------------------------------------
# Reference state machines
# ---------------------------------------------------------------------------

class TabuState:
    """UEs moved within the last ``tenure`` steps are tabu.

    Expiry counts iterations, not accepted moves, so the set holds at most
    ``tenure`` UEs and drains on its own (a FIFO sliding window). Tabu moves
    pass only on aspiration: the candidate would improve the incumbent best.
    """

    def __init__(self, cfg: Tabu):
        cfg.validate()
        self.tenure = cfg.tenure
        self.expiry: dict[int, int] = {}
        self.step = 0

    def is_tabu(self, move_ues: Iterable[int]) -> bool:
        return any(self.expiry.get(u, -1) >= self.step for u in move_ues)

    def accept(self, move_ues: Iterable[int], candidate_key, best_key) -> bool:
        if not self.is_tabu(move_ues):
            return True
        return candidate_key < best_key

    def on_accept(self, move_ues: Iterable[int]) -> None:
        for u in move_ues:
            self.expiry[u] = self.step + self.tenure

    def on_step(self) -> None:
        self.step += 1


class SimAnnealState:
    def __init__(self, cfg: SimAnneal, initial_scalar: float, rng: random.Random):
        cfg.validate()
        self.start_temp = cfg.start_temp if cfg.start_temp is not None \
            else max(0.05 * abs(initial_scalar), 1e-9)
        self.decay = cfg.decay_per_second
        self.rng = rng

    def temperature(self, elapsed: float) -> float:
        return self.start_temp * self.decay ** elapsed

    def accept(self, scalar_delta: float, elapsed: float) -> bool:
        if scalar_delta <= 0:
            return True
        temp = self.temperature(elapsed)
        if temp <= 0:
            return False
        return self.rng.random() < math.exp(-scalar_delta / temp)


class LateAcceptanceState:
    """Accept a candidate not worse than the current score or the score
    recorded ``list_length`` steps ago. The buffer records the post-decision
    score on every step, accepted or not."""

    def __init__(self, cfg: LateAcceptance, initial_scalar: float):
        cfg.validate()
        self.ring = [initial_scalar] * cfg.list_length
        self.pos = 0
        self.current = initial_scalar

    def accept(self, candidate_scalar: float) -> bool:
        return (candidate_scalar <= self.current
                or candidate_scalar <= self.ring[self.pos])

    def on_step(self, accepted: bool, candidate_scalar: float) -> None:
        if accepted:
            self.current = candidate_scalar
        self.ring[self.pos] = self.current
        self.pos = (self.pos + 1) % len(self.ring)


class StrategicOscState:
    """Greedy acceptance on a scalar whose overload weight cycles through
    ``weight_factors``, deliberately crossing the capacity-feasibility
    boundary in both directions."""

    def __init__(self, cfg: StrategicOsc, weights_by_component: tuple):
        cfg.validate()
        self.period = cfg.period
        self.factors = cfg.weight_factors
        self.weights = weights_by_component

    def factor_at(self, step_index: int) -> float:
        return self.factors[(step_index // self.period) % len(self.factors)]

    def reweighted(self, delta: ScoreDelta, step_index: int) -> float:
        f = self.factor_at(step_index)
        w = self.weights
        return (w[0] * delta.unassigned + w[1] * delta.blockers
                + w[2] * f * delta.overload_rr + w[3] * delta.aps_used)

    def accept(self, delta: ScoreDelta, step_index: int) -> bool:
        return self.reweighted(delta, step_index) <= 0
