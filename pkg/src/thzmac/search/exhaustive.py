"""Brute-force enumeration of every total assignment.

Independent oracle for the local search on desk-scale instances; shares no
code path with the incremental scorer.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..scoring import DEFAULT_ORDER, ScoreVector, order_permutation
from ..topology import Snapshot

MAX_ENUMERATION = 20_000_000


def exhaustive_optimum(snapshot: Snapshot,
                       order: tuple[str, ...] = DEFAULT_ORDER
                       ) -> tuple[ScoreVector, np.ndarray]:
    """Minimum lexicographic ScoreVector over all n_aps**n_ues assignments,
    plus one assignment attaining it (the first in mixed-radix order)."""
    n_ue, n_ap = snapshot.n_ues, snapshot.n_aps
    if n_ap < 1:
        raise ConfigError("need at least one AP")
    total = n_ap ** n_ue
    if total > MAX_ENUMERATION:
        raise ConfigError(f"{total} assignments exceed the enumeration limit")
    if n_ue == 0:
        return ScoreVector(0, 0, 0, 0), np.zeros(0, dtype=np.int64)

    idx = np.arange(total, dtype=np.int64)
    radix = n_ap ** np.arange(n_ue, dtype=np.int64)
    assigns = (idx[:, None] // radix[None, :]) % n_ap

    blk = snapshot.blocker_matrix().astype(np.int64)
    blockers = blk[np.arange(n_ue)[None, :], assigns].sum(axis=1)

    demands = snapshot.demands()
    caps = snapshot.capacities()
    overload = np.zeros(total, dtype=np.int64)
    used = np.zeros(total, dtype=np.int64)
    for ap in range(n_ap):
        mask = assigns == ap
        load = mask @ demands
        overload += np.maximum(load - caps[ap], 0)
        used += mask.any(axis=1)

    scores = np.stack([np.zeros(total, dtype=np.int64), blockers,
                       overload, used], axis=1)
    perm = order_permutation(order)
    # np.lexsort sorts by the last key first, so feed levels in reverse.
    keys = tuple(scores[:, perm[k]] for k in reversed(range(4)))
    winner = int(np.lexsort(keys)[0])
    vec = ScoreVector(*(int(v) for v in scores[winner]))
    return vec, assigns[winner].copy()
