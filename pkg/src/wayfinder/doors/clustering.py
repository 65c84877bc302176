"""Clustering repeated door detections into localized doors.

Detections from successive frames cluster by center distance; clusters carry
the side of the hallway (sign of the cross product against the hallway
direction) and an index by distance from the hallway start, per side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..geometry import dist
from .proposals import DoorDetection


@dataclass
class DoorCluster:
    center: tuple[float, float]
    post_min: tuple[float, float]
    post_max: tuple[float, float]
    count: int
    side: str = ""
    index: int = -1
    tag: str | None = None
    members: list[DoorDetection] = field(default_factory=list)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.post_min[0], self.post_min[1],
                self.post_max[0], self.post_max[1])


def hierarchical_clusters(points: list[tuple[float, float]],
                          threshold: float) -> list[list[int]]:
    """Single-linkage agglomeration until no pair of clusters is closer than
    the threshold.

    Computed as connected components of the threshold-neighborhood graph,
    which is exactly the partition single-linkage merging reaches.
    """
    n = len(points)
    if n == 0:
        return []
    from scipy.spatial import cKDTree

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree = cKDTree(points)
    for (i, j) in tree.query_pairs(threshold):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _median_point(points: list[tuple[float, float]]) -> tuple[float, float]:
    xs = sorted(p[0] for p in points)
    ys = sorted(p[1] for p in points)
    mid = (len(points) - 1) // 2
    return (xs[mid], ys[mid])


def cluster_detections(detections: list[DoorDetection],
                       hallway_start: tuple[float, float],
                       hallway_direction: float,
                       linkage_threshold: float = 0.5) -> list[DoorCluster]:
    if not detections:
        return []
    centers = [d.center for d in detections]
    groups = hierarchical_clusters(centers, linkage_threshold)
    dx, dy = math.cos(hallway_direction), math.sin(hallway_direction)
    clusters: list[DoorCluster] = []
    for group in groups:
        members = [detections[i] for i in group]
        center = _median_point([m.center for m in members])
        post_a = _median_point([m.proposal.left_world for m in members])
        post_b = _median_point([m.proposal.right_world for m in members])
        # Order posts by distance along the hallway from its start.
        def along(p):
            return (p[0] - hallway_start[0]) * dx + (p[1] - hallway_start[1]) * dy
        post_min, post_max = sorted((post_a, post_b), key=along)
        cross = (dx * (center[1] - hallway_start[1])
                 - dy * (center[0] - hallway_start[0]))
        side = "left" if cross > 0 else "right"
        clusters.append(DoorCluster(center=center, post_min=post_min,
                                    post_max=post_max, count=len(members),
                                    side=side, members=members))
    for side in ("left", "right"):
        on_side = [c for c in clusters if c.side == side]
        on_side.sort(key=lambda c: (c.center[0] - hallway_start[0]) * dx
                     + (c.center[1] - hallway_start[1]) * dy)
        for rank, c in enumerate(on_side):
            c.index = rank
    return clusters
