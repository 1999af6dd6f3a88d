"""Deterministic seed derivation for independent sub-streams."""

import numpy as np


def derive_seed(base: int, *key: int) -> int:
    """Stable 32-bit seed for the sub-stream identified by ``key``."""
    seq = np.random.SeedSequence(entropy=base, spawn_key=tuple(key))
    return int(seq.generate_state(1)[0])
