import math

import numpy as np

from thzmac.geometry import (corridor_blockers, polar_to_xy,
                             segment_intersects_rect,
                             segment_intersects_rect_bruteforce, wrap_angle,
                             xy_to_polar)


def test_polar_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(200):
        r = float(rng.random() * 500)
        theta = float(rng.random() * 2 * math.pi)
        x, y = polar_to_xy(r, theta)
        r2, t2 = xy_to_polar(x, y)
        assert abs(r - r2) <= 1e-9 * max(r, 1.0)
        assert abs(math.cos(theta) - math.cos(t2)) < 1e-9
        assert abs(math.sin(theta) - math.sin(t2)) < 1e-9


def test_wrap_angle_range():
    for a in np.linspace(-20, 20, 401):
        w = wrap_angle(float(a))
        assert -math.pi <= w <= math.pi
        assert abs(math.sin(w) - math.sin(a)) < 1e-9


def test_corridor_point_on_segment_counts():
    points = np.array([[0.5, 0.0], [0.25, 0.0], [0.75, 0.0]])
    mask = corridor_blockers(points, np.array([0.0, 0.0]),
                             np.array([1.0, 0.0]), radius=0.1)
    assert mask.all()


def test_corridor_endpoints_excluded():
    points = np.array([[0.0, 0.0], [1.0, 0.0], [-0.3, 0.0], [1.2, 0.0]])
    mask = corridor_blockers(points, np.array([0.0, 0.0]),
                             np.array([1.0, 0.0]), radius=0.1)
    assert not mask.any()


def test_corridor_zero_radius_blocks_nothing():
    points = np.array([[0.5, 0.0]])
    mask = corridor_blockers(points, np.array([0.0, 0.0]),
                             np.array([1.0, 0.0]), radius=0.0)
    assert not mask.any()


def test_segment_rect_basic():
    rect = (1.0, -1.0, 2.0, 1.0)
    assert segment_intersects_rect((0, 0), (3, 0), rect)
    assert not segment_intersects_rect((0, 2), (3, 2), rect)
    assert segment_intersects_rect((1.5, 0.0), (1.6, 0.5), rect)  # inside
    assert not segment_intersects_rect((0, 0), (0.5, 0.5), rect)


def test_segment_rect_agrees_with_bruteforce():
    rng = np.random.default_rng(42)
    for _ in range(3000):
        p0 = tuple(rng.uniform(-5, 5, 2))
        p1 = tuple(rng.uniform(-5, 5, 2))
        cx, cy = rng.uniform(-4, 4, 2)
        w, h = rng.uniform(0.2, 3.0, 2)
        rect = (cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2)
        assert segment_intersects_rect(p0, p1, rect) == \
            segment_intersects_rect_bruteforce(p0, p1, rect)
