"""2D geometry helpers shared across the stack.

All angles are radians; headings are normalized to [0, 2*pi). Points are
(x, y) tuples in meters unless a function says otherwise.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def norm_angle(a: float) -> float:
    """Normalize an angle into [0, 2*pi)."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return a if a < TWO_PI else 0.0


def signed_angle_diff(a: float, b: float) -> float:
    """Smallest signed difference a-b, in (-pi, pi]."""
    d = math.fmod(a - b, TWO_PI)
    if d <= -math.pi:
        d += TWO_PI
    elif d > math.pi:
        d -= TWO_PI
    return d


def angle_dist(a: float, b: float) -> float:
    return abs(signed_angle_diff(a, b))


def bearing(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Heading of the vector p -> q."""
    return norm_angle(math.atan2(q[1] - p[1], q[0] - p[0]))


def dist(p: tuple[float, float], q: tuple[float, float]) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def point_segment_distance(p: tuple[float, float],
                           a: tuple[float, float],
                           b: tuple[float, float]) -> float:
    """Distance from point p to segment ab."""
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    seg_len2 = dx * dx + dy * dy
    if seg_len2 <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg_len2
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def segments_intersect(p1, p2, q1, q2) -> bool:
    """True if closed segments p1p2 and q1q2 intersect."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if v > 1e-12:
            return 1
        if v < -1e-12:
            return -1
        return 0

    def on_seg(a, b, c):
        return (min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12
                and min(a[1], b[1]) - 1e-12 <= c[1] <= max(a[1], b[1]) + 1e-12)

    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_seg(p1, p2, q1):
        return True
    if o2 == 0 and on_seg(p1, p2, q2):
        return True
    if o3 == 0 and on_seg(q1, q2, p1):
        return True
    if o4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


def ray_segment_intersection(origin: tuple[float, float], heading: float,
                             a: tuple[float, float],
                             b: tuple[float, float]) -> float | None:
    """Range along the ray at which it hits segment ab, or None.

    Scalar reference form; the batched variant below is used in hot paths.
    """
    ox, oy = origin
    dx, dy = math.cos(heading), math.sin(heading)
    ex, ey = b[0] - a[0], b[1] - a[1]
    denom = dx * ey - dy * ex
    if abs(denom) < 1e-15:
        return None
    t = ((a[0] - ox) * ey - (a[1] - oy) * ex) / denom
    if t < 0.0:
        return None
    if abs(ex) >= abs(ey):
        u = (ox + t * dx - a[0]) / ex
    else:
        u = (oy + t * dy - a[1]) / ey
    if u < -1e-12 or u > 1.0 + 1e-12:
        return None
    return t


def ray_circle_intersection(origin: tuple[float, float], heading: float,
                            center: tuple[float, float],
                            radius: float) -> float | None:
    """Nearest positive range at which the ray hits the circle, or None."""
    ox, oy = origin
    dx, dy = math.cos(heading), math.sin(heading)
    fx, fy = ox - center[0], oy - center[1]
    b = 2.0 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - radius * radius
    disc = b * b - 4.0 * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    t1 = (-b - sq) / 2.0
    t2 = (-b + sq) / 2.0
    if t1 >= 0.0:
        return t1
    if t2 >= 0.0:
        return t2
    return None


class SegmentSet:
    """Wall segments packed into arrays for batched ray casting."""

    def __init__(self, segments: list[tuple[float, float, float, float]]):
        arr = np.asarray(segments, dtype=float).reshape(-1, 4)
        self.raw = [tuple(row) for row in arr]
        self.ax = arr[:, 0]
        self.ay = arr[:, 1]
        self.ex = arr[:, 2] - arr[:, 0]
        self.ey = arr[:, 3] - arr[:, 1]

    def __len__(self) -> int:
        return len(self.ax)

    def cast(self, origin: tuple[float, float], headings: np.ndarray,
             max_range: float) -> np.ndarray:
        """Range per heading (inf where nothing is hit within max_range)."""
        ox, oy = origin
        dx = np.cos(headings)[:, None]
        dy = np.sin(headings)[:, None]
        denom = dx * self.ey[None, :] - dy * self.ex[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = ((self.ax[None, :] - ox) * self.ey[None, :]
                 - (self.ay[None, :] - oy) * self.ex[None, :]) / denom
            u_num_x = ox + t * dx - self.ax[None, :]
            u_num_y = oy + t * dy - self.ay[None, :]
            use_x = np.abs(self.ex) >= np.abs(self.ey)
            u = np.where(use_x[None, :],
                         np.divide(u_num_x, self.ex[None, :],
                                   out=np.full_like(t, np.nan),
                                   where=self.ex[None, :] != 0),
                         np.divide(u_num_y, self.ey[None, :],
                                   out=np.full_like(t, np.nan),
                                   where=self.ey[None, :] != 0))
        ok = (np.abs(denom) > 1e-15) & (t >= 0.0) & (u >= -1e-12) & (u <= 1.0 + 1e-12)
        t = np.where(ok, t, np.inf)
        best = t.min(axis=1)
        best[best > max_range] = np.inf
        return best

    def min_distance(self, p: tuple[float, float]) -> float:
        """Distance from p to the nearest segment."""
        px, py = p
        seg_len2 = self.ex * self.ex + self.ey * self.ey
        t = ((px - self.ax) * self.ex + (py - self.ay) * self.ey)
        t = np.divide(t, seg_len2, out=np.zeros_like(t), where=seg_len2 > 0)
        t = np.clip(t, 0.0, 1.0)
        qx = self.ax + t * self.ex
        qy = self.ay + t * self.ey
        return float(np.sqrt((px - qx) ** 2 + (py - qy) ** 2).min())

    def segment_blocked(self, p: tuple[float, float], q: tuple[float, float]) -> bool:
        """True if the open segment pq crosses any stored segment."""
        for (x1, y1, x2, y2) in self.raw:
            if segments_intersect(p, q, (x1, y1), (x2, y2)):
                return True
        return False


def point_in_polygon(p: tuple[float, float],
                     poly: list[tuple[float, float]]) -> bool:
    """Even-odd rule point-in-polygon test."""
    x, y = p
    inside = False
    n = len(poly)
    j = n - 1
    for i in range(n):
        xi, yi = poly[i]
        xj, yj = poly[j]
        if (yi > y) != (yj > y):
            xcrit = xi + (y - yi) / (yj - yi) * (xj - xi)
            if x < xcrit:
                inside = not inside
        j = i
    return inside


def rotate_point(p: tuple[float, float], angle: float) -> tuple[float, float]:
    c, s = math.cos(angle), math.sin(angle)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])
