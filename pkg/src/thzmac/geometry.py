"""2-D geometry primitives shared by the topology and channel-scene generators."""

from __future__ import annotations

import math

import numpy as np


def polar_to_xy(r: float, theta: float) -> tuple[float, float]:
    return (r * math.cos(theta), r * math.sin(theta))


def xy_to_polar(x: float, y: float) -> tuple[float, float]:
    """Inverse of :func:`polar_to_xy`; theta normalized to [0, 2*pi)."""
    r = math.hypot(x, y)
    theta = math.atan2(y, x) % (2.0 * math.pi)
    return (r, theta)


def wrap_angle(a: float) -> float:
    """Wrap an angle to [-pi, pi]."""
    w = (a + math.pi) % (2.0 * math.pi) - math.pi
    return w


def corridor_blockers(points: np.ndarray, start: np.ndarray, end: np.ndarray,
                      radius: float) -> np.ndarray:
    """Boolean mask of ``points`` lying strictly inside the open corridor
    around the segment ``start -> end``.

    A point blocks the segment when its perpendicular foot falls strictly
    between the endpoints (0 < t < 1) and its perpendicular distance is
    strictly below ``radius``. Endpoints are excluded, so a point sitting
    exactly on either endpoint never blocks, and ``radius == 0`` blocks
    nothing.
    """
    w = end - start
    w2 = float(w @ w)
    if w2 <= 0.0:
        return np.zeros(len(points), dtype=bool)
    v = points - start
    proj = v @ w
    inside = (proj > 0.0) & (proj < w2)
    d2 = (v * v).sum(axis=1) - (proj * proj) / w2
    return inside & (d2 < radius * radius)


def segment_intersects_rect(p0: tuple[float, float], p1: tuple[float, float],
                            rect: tuple[float, float, float, float]) -> bool:
    """Liang-Barsky clip test: does segment ``p0 -> p1`` hit the axis-aligned
    rectangle ``(xmin, ymin, xmax, ymax)``?

    Touching the boundary counts as an intersection.
    """
    xmin, ymin, xmax, ymax = rect
    x0, y0 = p0
    dx = p1[0] - x0
    dy = p1[1] - y0
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, x0 - xmin), (dx, xmax - x0),
                 (-dy, y0 - ymin), (dy, ymax - y0)):
        if p == 0.0:
            if q < 0.0:
                return False
            continue
        t = q / p
        if p < 0.0:
            if t > t1:
                return False
            if t > t0:
                t0 = t
        else:
            if t < t0:
                return False
            if t < t1:
                t1 = t
    return True


def _segments_cross(a0, a1, b0, b1) -> bool:
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    def on_seg(p, q, r):
        return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
                and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))

    o1 = orient(a0, a1, b0)
    o2 = orient(a0, a1, b1)
    o3 = orient(b0, b1, a0)
    o4 = orient(b0, b1, a1)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and on_seg(a0, a1, b0):
        return True
    if o2 == 0 and on_seg(a0, a1, b1):
        return True
    if o3 == 0 and on_seg(b0, b1, a0):
        return True
    if o4 == 0 and on_seg(b0, b1, a1):
        return True
    return False


def segment_intersects_rect_bruteforce(p0, p1, rect) -> bool:
    """Reference oracle for :func:`segment_intersects_rect`.

    Checks the segment against each rectangle edge plus containment of an
    endpoint; deliberately independent of the clip-based implementation.
    """
    xmin, ymin, xmax, ymax = rect

    def inside(p):
        return xmin <= p[0] <= xmax and ymin <= p[1] <= ymax

    if inside(p0) or inside(p1):
        return True
    corners = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
    for i in range(4):
        if _segments_cross(p0, p1, corners[i], corners[(i + 1) % 4]):
            return True
    return False
