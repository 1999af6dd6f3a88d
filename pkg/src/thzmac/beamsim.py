"""Beam-allocation environment: codebook beams, SINR, sum-rate reward.

One AP at the origin serves mobile UEs inside a disk cell by assigning each
UE a beam from a fixed codebook of ``n_beams`` angular sectors. The reward
of a step is the sum of per-UE normalized rates log2(1 + SINR). Sharing a
beam between co-located UEs removes their mutual inter-beam interference,
which is exactly the effect the agents are meant to discover.

The PHY abstraction is a sectored main/side-lobe pattern: beam b covers the
sector of width 2*pi/n_beams centered at 2*pi*b/n_beams; gain toward a UE
is ``main_lobe_gain`` inside the serving sector and ``side_lobe_gain``
outside. Interference sums over the other *distinct* active beams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .topology import PolarPoint

TWO_PI = 2.0 * math.pi

# Distance floor keeps path loss finite when a UE walks over the AP.
MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class BeamEnvConfig:
    n_antennas: int = 8
    n_beams: int | None = None          # default: 2 x antennas
    n_ues: int = 5
    cell_radius: float = 100.0
    allow_shared_beam: bool = True
    main_lobe_gain: float | None = None  # default: n_antennas
    side_lobe_gain: float = 0.1
    tx_power: float = 1.0
    noise_power: float = 4.5e-6          # ~20 dB median SINR at 50 m, 8 antennas
    path_loss_exponent: float = 2.5
    episode_length: int = 20
    ue_step_sigma: float = 2.0
    cluster_spawn_sigma: float | None = None  # None: uniform spawn in the cell

    @property
    def beams(self) -> int:
        return self.n_beams if self.n_beams is not None else 2 * self.n_antennas

    @property
    def main_gain(self) -> float:
        return self.main_lobe_gain if self.main_lobe_gain is not None \
            else float(self.n_antennas)

    def validate(self) -> None:
        if self.n_ues < 1:
            raise ConfigError("n_ues must be >= 1")
        if self.beams < 1:
            raise ConfigError("n_beams must be >= 1")
        if not self.allow_shared_beam and self.beams < self.n_ues:
            raise ConfigError("distinct-beam mode needs n_beams >= n_ues")
        if self.main_gain <= 0 or self.side_lobe_gain <= 0:
            raise ConfigError("gains must be positive")
        if self.main_gain <= self.side_lobe_gain:
            raise ConfigError("main lobe gain must exceed side lobe gain")
        if self.tx_power <= 0 or self.noise_power <= 0:
            raise ConfigError("powers must be positive")
        if self.episode_length < 1:
            raise ConfigError("episode_length must be >= 1")


@dataclass(frozen=True)
class EnvState:
    ue_positions: tuple[PolarPoint, ...]
    last_sinrs: tuple[float, ...]
    step: int = 0


Action = Sequence[int]


def validate_action(action: Action, cfg: BeamEnvConfig) -> None:
    if len(action) != cfg.n_ues:
        raise ConfigError("action must pick one beam per UE")
    for b in action:
        if not 0 <= b < cfg.beams:
            raise ConfigError(f"beam index {b} out of range")
    if not cfg.allow_shared_beam and len(set(action)) != len(action):
        raise ConfigError("shared beams are disabled; beams must be distinct")


def beam_gain(beam: int, azimuth: float, cfg: BeamEnvConfig) -> float:
    """Sectored pattern: main gain iff the azimuth falls in the beam's
    sector (half-width pi/n_beams, boundary inclusive)."""
    center = TWO_PI * beam / cfg.beams
    offset = abs((azimuth - center + math.pi) % TWO_PI - math.pi)
    return cfg.main_gain if offset <= math.pi / cfg.beams else cfg.side_lobe_gain


def sinr(state: EnvState, action: Action, ue_index: int,
         cfg: BeamEnvConfig) -> float:
    """Linear SINR of one UE under the joint beam choice.

    Interference counts each *other* active beam once, regardless of how
    many UEs it serves; the UE's own serving beam never interferes with it.
    """
    pos = state.ue_positions[ue_index]
    dist = max(pos.r, MIN_DISTANCE_M)
    path = dist ** (-cfg.path_loss_exponent)
    own = action[ue_index]
    signal = cfg.tx_power * beam_gain(own, pos.theta, cfg) * path
    interference = 0.0
    for beam in set(action):
        if beam != own:
            interference += cfg.tx_power * beam_gain(beam, pos.theta, cfg) * path
    return signal / (cfg.noise_power + interference)


def step_reward(state: EnvState, action: Action, cfg: BeamEnvConfig) -> float:
    """Sum of normalized rates log2(1 + SINR); deterministic in (state, action)."""
    validate_action(action, cfg)
    return sum(math.log2(1.0 + sinr(state, action, u, cfg))
               for u in range(cfg.n_ues))


class BeamEnv:
    """Episodic environment; UE motion is a reflected Gaussian random walk."""

    def __init__(self, cfg: BeamEnvConfig, seed: int = 0):
        cfg.validate()
        self.cfg = cfg
        self.rng = np.random.default_rng(seed)
        self.state: EnvState | None = None

    def reset(self) -> EnvState:
        cfg = self.cfg
        if cfg.cluster_spawn_sigma is not None:
            r0 = cfg.cell_radius * math.sqrt(self.rng.random())
            t0 = self.rng.random() * TWO_PI
            cx, cy = r0 * math.cos(t0), r0 * math.sin(t0)
            xs = cx + self.rng.normal(0.0, cfg.cluster_spawn_sigma, cfg.n_ues)
            ys = cy + self.rng.normal(0.0, cfg.cluster_spawn_sigma, cfg.n_ues)
            positions = [self._reflect(x, y) for x, y in zip(xs, ys)]
        else:
            rs = cfg.cell_radius * np.sqrt(self.rng.random(cfg.n_ues))
            ts = self.rng.random(cfg.n_ues) * TWO_PI
            positions = [PolarPoint(float(r), float(t)) for r, t in zip(rs, ts)]
        self.state = EnvState(tuple(positions), (0.0,) * cfg.n_ues, 0)
        return self.state

    def _reflect(self, x: float, y: float) -> PolarPoint:
        r = math.hypot(x, y)
        theta = math.atan2(y, x) % TWO_PI
        radius = self.cfg.cell_radius
        while r > radius:
            r = 2.0 * radius - r
        return PolarPoint(abs(r), theta)

    def step(self, action: Action) -> tuple[EnvState, float]:
        """Reward for the action in the current state, then a stochastic
        position update. Only the transition is random."""
        if self.state is None:
            raise ConfigError("call reset() before step()")
        cfg = self.cfg
        reward = step_reward(self.state, action, cfg)
        sinrs = tuple(sinr(self.state, action, u, cfg) for u in range(cfg.n_ues))
        positions = []
        for pos in self.state.ue_positions:
            x, y = pos.xy()
            x += self.rng.normal(0.0, cfg.ue_step_sigma)
            y += self.rng.normal(0.0, cfg.ue_step_sigma)
            positions.append(self._reflect(x, y))
        self.state = EnvState(tuple(positions), sinrs, self.state.step + 1)
        return self.state, reward


# ---------------------------------------------------------------------------
# Exhaustive action search
# ---------------------------------------------------------------------------

def enumerate_rewards(state: EnvState, cfg: BeamEnvConfig,
                      max_actions: int = 2_000_000
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized reward of every joint action in the shared-beam space.

    Returns (rewards, distinct_mask); the distinct-beam optimum is the max
    of rewards[distinct_mask]. Independent of :func:`sinr` vectorization
    aside from the shared gain definition.
    """
    n_beams, n_ues = cfg.beams, cfg.n_ues
    total = n_beams ** n_ues
    if total > max_actions:
        raise ConfigError(f"{total} joint actions exceed the enumeration limit")
    idx = np.arange(total, dtype=np.int64)
    radix = n_beams ** np.arange(n_ues, dtype=np.int64)
    actions = (idx[:, None] // radix[None, :]) % n_beams

    azimuths = np.array([p.theta for p in state.ue_positions])
    dists = np.maximum(np.array([p.r for p in state.ue_positions]), MIN_DISTANCE_M)
    path = dists ** (-cfg.path_loss_exponent)
    centers = TWO_PI * np.arange(n_beams) / n_beams
    offset = np.abs((azimuths[None, :] - centers[:, None] + math.pi) % TWO_PI
                    - math.pi)
    gain = np.where(offset <= math.pi / n_beams, cfg.main_gain,
                    cfg.side_lobe_gain)  # (n_beams, n_ues)

    active = np.zeros((total, n_beams), dtype=bool)
    rows = np.repeat(idx, n_ues)
    active[rows, actions.ravel()] = True
    gain_sum = active @ gain                                   # (total, n_ues)
    own_gain = gain[actions, np.arange(n_ues)[None, :]]
    signal = cfg.tx_power * own_gain * path[None, :]
    interference = cfg.tx_power * (gain_sum - own_gain) * path[None, :]
    sinrs = signal / (cfg.noise_power + interference)
    rewards = np.log2(1.0 + sinrs).sum(axis=1)
    distinct = active.sum(axis=1) == n_ues
    return rewards, distinct


def optimal_reward(state: EnvState, cfg: BeamEnvConfig, shared: bool) -> float:
    rewards, distinct = enumerate_rewards(state, cfg)
    if shared:
        return float(rewards.max())
    if not distinct.any():
        raise ConfigError("no distinct-beam action exists (n_beams < n_ues)")
    return float(rewards[distinct].max())


def count_valid_actions(cfg: BeamEnvConfig) -> int:
    """Enumerated size of the action space under the sharing rule."""
    state = EnvState((PolarPoint(1.0, 0.0),) * cfg.n_ues, (0.0,) * cfg.n_ues)
    rewards, distinct = enumerate_rewards(state, cfg)
    return len(rewards) if cfg.allow_shared_beam else int(distinct.sum())


# ---------------------------------------------------------------------------
# Agents
# ---------------------------------------------------------------------------

class Agent:
    """Episodic interface: observe -> action, feedback(reward), end_episode.

    Structured so a heavier learner (e.g. an actor-critic) can drop in
    without touching the episode runner.
    """

    def observe(self, state: EnvState) -> Action:
        raise NotImplementedError

    def feedback(self, reward: float) -> None:
        pass

    def end_episode(self) -> None:
        pass


class RandomAgent(Agent):
    def __init__(self, cfg: BeamEnvConfig, seed: int = 0):
        self.cfg = cfg
        self.rng = np.random.default_rng(seed)

    def observe(self, state: EnvState) -> Action:
        cfg = self.cfg
        if cfg.allow_shared_beam:
            return [int(b) for b in self.rng.integers(0, cfg.beams, cfg.n_ues)]
        picked = self.rng.choice(cfg.beams, size=cfg.n_ues, replace=False)
        return [int(b) for b in picked]


class GreedyOracleAgent(Agent):
    """Exhaustive search when the joint space is small, otherwise per-UE
    best covering beam (sequential distinct assignment when required)."""

    def __init__(self, cfg: BeamEnvConfig, exhaustive_limit: int = 100_000):
        self.cfg = cfg
        self.exhaustive_limit = exhaustive_limit

    def observe(self, state: EnvState) -> Action:
        cfg = self.cfg
        if cfg.beams ** cfg.n_ues <= self.exhaustive_limit:
            rewards, distinct = enumerate_rewards(state, cfg)
            if not cfg.allow_shared_beam:
                rewards = np.where(distinct, rewards, -np.inf)
            winner = int(np.argmax(rewards))
            radix = cfg.beams ** np.arange(cfg.n_ues, dtype=np.int64)
            return [int((winner // r) % cfg.beams) for r in radix]
        action = []
        used: set[int] = set()
        for u in range(cfg.n_ues):
            az = state.ue_positions[u].theta
            gains = [(beam_gain(b, az, cfg), -b) for b in range(cfg.beams)]
            ordered = sorted(range(cfg.beams),
                             key=lambda b: (-gains[b][0], b))
            pick = next((b for b in ordered
                         if cfg.allow_shared_beam or b not in used), ordered[0])
            used.add(pick)
            action.append(pick)
        return action


class PolicyGradientAgent(Agent):
    """Tabular softmax policy over (azimuth bin, distance band) features,
    updated per episode by the score-function gradient against a running
    mean baseline."""

    N_DIST_BANDS = 3

    def __init__(self, cfg: BeamEnvConfig, seed: int = 0,
                 learning_rate: float = 0.01):
        self.cfg = cfg
        self.rng = np.random.default_rng(seed)
        self.lr = learning_rate
        self.logits = np.zeros((cfg.beams, self.N_DIST_BANDS, cfg.beams))
        self.baseline = 0.0
        self.episodes_seen = 0
        self._grads: list[np.ndarray] = []
        self._episode_reward = 0.0

    def _features(self, pos: PolarPoint) -> tuple[int, int]:
        cfg = self.cfg
        az_bin = int(round(pos.theta * cfg.beams / TWO_PI)) % cfg.beams
        band = min(int(self.N_DIST_BANDS * pos.r / cfg.cell_radius),
                   self.N_DIST_BANDS - 1)
        return az_bin, band

    def observe(self, state: EnvState) -> Action:
        cfg = self.cfg
        action: list[int] = []
        grad = np.zeros_like(self.logits)
        used: set[int] = set()
        for u in range(cfg.n_ues):
            az_bin, band = self._features(state.ue_positions[u])
            logits = self.logits[az_bin, band].copy()
            if not cfg.allow_shared_beam and used:
                logits[list(used)] = -np.inf
            z = logits - logits.max()
            probs = np.exp(z)
            probs /= probs.sum()
            beam = int(self.rng.choice(cfg.beams, p=probs))
            used.add(beam)
            action.append(beam)
            onehot = np.zeros(cfg.beams)
            onehot[beam] = 1.0
            grad[az_bin, band] += onehot - probs
        self._grads.append(grad)
        return action

    def feedback(self, reward: float) -> None:
        self._episode_reward += reward

    def end_episode(self) -> None:
        advantage = self._episode_reward - self.baseline
        if self._grads:
            self.logits += self.lr * advantage * sum(self._grads)
        self.episodes_seen += 1
        # running mean of episode returns
        self.baseline += (self._episode_reward - self.baseline) / self.episodes_seen
        self._grads = []
        self._episode_reward = 0.0


AGENT_KINDS = ("random", "greedy", "pg")


def make_agent(kind: str, cfg: BeamEnvConfig, seed: int = 0) -> Agent:
    if kind == "random":
        return RandomAgent(cfg, seed)
    if kind == "greedy":
        return GreedyOracleAgent(cfg)
    if kind == "pg":
        return PolicyGradientAgent(cfg, seed)
    raise ConfigError(f"unknown agent kind {kind!r}; choose from {AGENT_KINDS}")


@dataclass(frozen=True)
class EpisodeStats:
    episode: int
    mean_reward: float
    max_reward: float


def run_episodes(agent_kind: str, cfg: BeamEnvConfig, n_episodes: int,
                 seed: int = 0) -> list[EpisodeStats]:
    """Run seeded episodes; per episode, the mean and max of step rewards."""
    cfg.validate()
    if n_episodes < 1:
        raise ConfigError("n_episodes must be >= 1")
    env = BeamEnv(cfg, seed=seed)
    agent = make_agent(agent_kind, cfg, seed=seed + 1)
    stats = []
    for episode in range(n_episodes):
        env.reset()
        rewards = []
        for _ in range(cfg.episode_length):
            action = agent.observe(env.state)
            _, reward = env.step(action)
            agent.feedback(reward)
            rewards.append(reward)
        agent.end_episode()
        stats.append(EpisodeStats(episode, float(np.mean(rewards)),
                                  float(np.max(rewards))))
    return stats


def episodes_to_csv(stats: list[EpisodeStats]) -> str:
    lines = ["episode,mean_reward,max_reward"]
    for s in stats:
        lines.append(f"{s.episode},{s.mean_reward!r},{s.max_reward!r}")
    return "\n".join(lines) + "\n"
