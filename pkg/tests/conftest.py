import math

import numpy as np
import pytest

from thzmac.geometry import xy_to_polar
from thzmac.topology import (AccessPoint, PolarPoint, Snapshot,
                             SnapshotConfig, UserEquipment, generate_snapshot)


def snapshot_from_xy(ue_xy, ap_xy, capacities=None, demands=None,
                     area_km2=None, blocker_radius=1.0, seed=0,
                     clusters=None) -> Snapshot:
    """Build a snapshot from explicit Cartesian positions."""
    ue_xy = [tuple(map(float, p)) for p in ue_xy]
    ap_xy = [tuple(map(float, p)) for p in ap_xy]
    if capacities is None:
        capacities = [100] * len(ap_xy)
    if demands is None:
        demands = [10] * len(ue_xy)
    if area_km2 is None:
        extent = max([1.0] + [math.hypot(x, y) for x, y in ue_xy + ap_xy])
        area_km2 = math.pi * (2.0 * extent) ** 2 / 1e6
    aps = [AccessPoint(i, PolarPoint(*xy_to_polar(x, y)), int(c))
           for i, ((x, y), c) in enumerate(zip(ap_xy, capacities))]
    ues = [UserEquipment(i, PolarPoint(*xy_to_polar(x, y)), int(d))
           for i, ((x, y), d) in enumerate(zip(ue_xy, demands))]
    if clusters is None:
        clusters = {u.id: 0 for u in ues} if aps else {}
    return Snapshot(aps, ues, area_km2, blocker_radius, seed, clusters)


@pytest.fixture
def tiny_snapshot() -> Snapshot:
    return generate_snapshot(SnapshotConfig(area_km2=0.02, n_aps=3, n_ues=6,
                                            seed=11))


@pytest.fixture
def desk_snapshot() -> Snapshot:
    return generate_snapshot(SnapshotConfig(area_km2=0.1, n_aps=8, n_ues=30,
                                            seed=5))


def random_tiny_config(rng: np.random.Generator, max_ues=6, max_aps=4
                       ) -> SnapshotConfig:
    return SnapshotConfig(area_km2=0.02,
                          n_aps=int(rng.integers(2, max_aps + 1)),
                          n_ues=int(rng.integers(2, max_ues + 1)),
                          seed=int(rng.integers(0, 2**31)))
