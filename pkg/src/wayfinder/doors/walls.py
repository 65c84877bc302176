"""Wall extraction from raw scan points.

Scan points (an ordered sweep) are simplified with Douglas-Peucker into line
segments, clustered by angle, then by offset after rotating each segment
flat, and each final cluster merges into one wall spanning the extreme
endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..config import SimConfig
from ..geometry import dist


@dataclass(frozen=True)
class Wall:
    x1: float
    y1: float
    x2: float
    y2: float
    angle: float  # in [0, pi)
    members: int

    @property
    def endpoints(self):
        return (self.x1, self.y1), (self.x2, self.y2)

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)


def douglas_peucker(points: list[tuple[float, float]],
                    epsilon: float) -> list[tuple[float, float]]:
    """Classic recursive polyline simplification."""
    if len(points) < 3:
        return list(points)
    a, b = points[0], points[-1]
    ax, ay = a
    bx, by = b
    norm = math.hypot(bx - ax, by - ay)
    best_d = -1.0
    best_i = 0
    for i in range(1, len(points) - 1):
        px, py = points[i]
        if norm < 1e-12:
            d = math.hypot(px - ax, py - ay)
        else:
            d = abs((bx - ax) * (ay - py) - (ax - px) * (by - ay)) / norm
        if d > best_d:
            best_d = d
            best_i = i
    if best_d <= epsilon:
        return [a, b]
    left = douglas_peucker(points[:best_i + 1], epsilon)
    right = douglas_peucker(points[best_i:], epsilon)
    return left[:-1] + right


def segment_angle(x1, y1, x2, y2) -> float:
    """Orientation in [0, pi)."""
    a = math.atan2(y2 - y1, x2 - x1) % math.pi
    return a if a < math.pi - 1e-12 else 0.0


def flatten_rotate(segment: tuple[float, float, float, float]
                   ) -> tuple[float, float, float, float]:
    """Rotate a segment by the negative of its own angle.

    The result is parallel to the x axis, so both endpoints share one y
    value: the segment's signed offset from the origin along its normal.
    """
    x1, y1, x2, y2 = segment
    theta = segment_angle(x1, y1, x2, y2)
    c, s = math.cos(-theta), math.sin(-theta)
    return (c * x1 - s * y1, s * x1 + c * y1,
            c * x2 - s * y2, s * x2 + c * y2)


def _angular_gap(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def _single_linkage(items, metric, threshold):
    """Greedy single-linkage clustering; returns lists of item indices."""
    clusters = [[i] for i in range(len(items))]
    merged = True
    while merged and len(clusters) > 1:
        merged = False
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                d = min(metric(items[a], items[b])
                        for a in clusters[i] for b in clusters[j])
                if d <= threshold and (best is None or d < best[0]):
                    best = (d, i, j)
        if best is not None:
            _, i, j = best
            clusters[i] = clusters[i] + clusters[j]
            del clusters[j]
            merged = True
    return clusters


def _split_sweep_runs(points, gap=1.2):
    runs = []
    current = [points[0]]
    for p in points[1:]:
        if dist(current[-1], p) > gap:
            if len(current) >= 2:
                runs.append(current)
            current = [p]
        else:
            current.append(p)
    if len(current) >= 2:
        runs.append(current)
    # The sweep wraps around: join the last run to the first when contiguous.
    if len(runs) >= 2 and dist(runs[-1][-1], runs[0][0]) <= gap:
        runs[0] = runs[-1] + runs[0]
        runs.pop()
    return runs


def extract_walls(scan_points: list[tuple[float, float]],
                  config: SimConfig | None = None) -> list[Wall]:
    """Merge a scan sweep into wall segments."""
    config = config or SimConfig()
    if len(scan_points) < 3:
        return []
    segments: list[tuple[float, float, float, float]] = []
    for run in _split_sweep_runs(list(scan_points)):
        simplified = douglas_peucker(run, config.dp_epsilon)
        for a, b in zip(simplified, simplified[1:]):
            if dist(a, b) > 0.1:
                segments.append((a[0], a[1], b[0], b[1]))
    if not segments:
        return []

    angles = [segment_angle(*s) for s in segments]
    angle_clusters = _single_linkage(
        angles, _angular_gap, math.radians(config.wall_angle_cluster_deg))

    walls: list[Wall] = []
    for cluster in angle_clusters:
        offsets = []
        for idx in cluster:
            flat = flatten_rotate(segments[idx])
            offsets.append((flat[1] + flat[3]) / 2.0)
        offset_clusters = _single_linkage(
            list(range(len(cluster))),
            lambda a, b: abs(offsets[a] - offsets[b]),
            config.wall_offset_cluster)
        for group in offset_clusters:
            members = [segments[cluster[k]] for k in group]
            mean_angle = _mean_orientation([segment_angle(*s)
                                            for s in members])
            direction = (math.cos(mean_angle), math.sin(mean_angle))
            pts = []
            for (x1, y1, x2, y2) in members:
                pts.append((x1, y1))
                pts.append((x2, y2))
            proj = [p[0] * direction[0] + p[1] * direction[1] for p in pts]
            lo = pts[proj.index(min(proj))]
            hi = pts[proj.index(max(proj))]
            walls.append(Wall(lo[0], lo[1], hi[0], hi[1], mean_angle,
                              len(members)))
    return [w for w in walls if w.length > 1e-9]


def _mean_orientation(angles: list[float]) -> float:
    """Mean of orientations (period pi) via the doubled-angle trick."""
    s = sum(math.sin(2 * a) for a in angles)
    c = sum(math.cos(2 * a) for a in angles)
    return (math.atan2(s, c) / 2.0) % math.pi
