"""Multi-scale intersection detection, registration, and refinement.

Detection works per scale (each trajectory distance): adjacent drivable
headings form traversable areas, areas wider than the hallway width are
dropped, and the surviving hallway trajectories are combined into tuples of
2 to 4 members roughly 90 degrees apart whose gaps are separated by
obstacles. Candidates are ranked quadruple > triple > pair, then larger
scale, then higher clearance score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..config import SimConfig
from ..geometry import dist, norm_angle
from .assignment import hungarian_assign
from .graph import Hallway, QualitativeMap, RegisteredIntersection
from .trajectories import ClearanceField, Trajectory, drivability_matrix, heading_of

TYPE_BY_SIZE = {2: "elbow", 3: "three-way", 4: "four-way"}


@dataclass(frozen=True)
class DetectedIntersection:
    location: tuple[float, float]
    type: str
    hallways: tuple[Trajectory, ...]
    score: float
    scale: float


@dataclass(frozen=True)
class _Candidate:
    size: int
    scale: float
    score: float
    point: tuple[float, float]
    members: tuple[Trajectory, ...]
    order_key: tuple

    def sort_key(self):
        return (-self.size, -self.scale, -self.score, self.order_key)


def _traversable_areas(indices: list[int], n_headings: int) -> list[list[int]]:
    """Group circularly adjacent heading indices."""
    if not indices:
        return []
    index_set = set(indices)
    if len(index_set) == n_headings:
        return [sorted(index_set)]
    areas = []
    # Start each run just after a gap.
    starts = [i for i in index_set if (i - 1) % n_headings not in index_set]
    for start in sorted(starts):
        run = [start]
        nxt = (start + 1) % n_headings
        while nxt in index_set:
            run.append(nxt)
            nxt = (nxt + 1) % n_headings
        areas.append(run)
    return areas


def _arc_blocked(field: ClearanceField, point: tuple[float, float],
                 radius: float, start: float, end: float,
                 resolution: float) -> bool:
    """True if the arc from start to end (ccw) crosses an obstacle cell."""
    sweep = (end - start) % (2.0 * math.pi)
    if sweep <= 0.0:
        sweep = 2.0 * math.pi
    n = max(3, int(sweep * radius / resolution))
    angles = start + sweep * np.arange(n + 1) / n
    xs = point[0] + radius * np.cos(angles)
    ys = point[1] + radius * np.sin(angles)
    return bool(field.obstacle_at(xs, ys).any())


def candidate_intersections(field: ClearanceField, point: tuple[float, float],
                            hallway_width: float, config: SimConfig
                            ) -> list[_Candidate]:
    """All scored intersection candidates as seen from one point."""
    matrix = drivability_matrix(field, point, config)
    n_head = config.n_headings
    tol = math.radians(config.tuple_angle_tol_deg)
    lo, hi = math.pi / 2.0 - tol, math.pi / 2.0 + tol
    candidates: list[_Candidate] = []
    loc_clear = float(field.obstacle_clearance(
        np.array([point[0]]), np.array([point[1]]))[0])

    for di, scale in enumerate(config.trajectory_distances):
        indices = [hi_ for hi_ in range(n_head) if matrix[di, hi_]]
        if len(indices) < 2:
            continue
        areas = _traversable_areas(indices, n_head)
        hallway_idx: list[int] = []
        for area in areas:
            targets = [(point[0] + scale * math.cos(heading_of(i, n_head)),
                        point[1] + scale * math.sin(heading_of(i, n_head)))
                       for i in area]
            width = 0.0
            for a in range(len(targets)):
                for b in range(a + 1, len(targets)):
                    width = max(width, dist(targets[a], targets[b]))
            if width <= hallway_width:
                hallway_idx.extend(area)
        if len(hallway_idx) < 2:
            continue
        hallway_idx = sorted(set(hallway_idx))
        headings = {i: heading_of(i, n_head) for i in hallway_idx}

        # successors[i] = indices j whose ccw gap from i is about 90 degrees
        successors: dict[int, list[int]] = {}
        for i in hallway_idx:
            succ = []
            for j in hallway_idx:
                if i == j:
                    continue
                gap = (headings[j] - headings[i]) % (2.0 * math.pi)
                if lo <= gap <= hi:
                    succ.append(j)
            successors[i] = succ

        arc_cache: dict[tuple[int, int], bool] = {}

        def blocked(i: int, j: int) -> bool:
            key = (i, j)
            if key not in arc_cache:
                arc_cache[key] = _arc_blocked(field, point, scale,
                                              headings[i], headings[j],
                                              config.grid_resolution)
            return arc_cache[key]

        def score_of(members: list[int]) -> float:
            xs = np.array([point[0] + scale * math.cos(headings[i])
                           for i in members])
            ys = np.array([point[1] + scale * math.sin(headings[i])
                           for i in members])
            return loc_clear + float(field.obstacle_clearance(xs, ys).sum())

        def emit(members: list[int]) -> None:
            trajs = tuple(
                Trajectory(scale, headings[i],
                           (point[0] + scale * math.cos(headings[i]),
                            point[1] + scale * math.sin(headings[i])))
                for i in members)
            candidates.append(_Candidate(
                size=len(members), scale=scale, score=score_of(members),
                point=point, members=trajs, order_key=tuple(members)))

        seen: set[tuple[int, ...]] = set()
        for a in hallway_idx:
            for b in successors[a]:
                pair = tuple(sorted((a, b)))
                if pair not in seen and blocked(a, b) and blocked(b, a):
                    seen.add(pair)
                    emit(sorted(pair))
                for c in successors[b]:
                    if c in (a, b):
                        continue
                    triple = tuple(sorted((a, b, c)))
                    if (triple not in seen and blocked(a, b) and blocked(b, c)
                            and blocked(c, a)):
                        seen.add(triple)
                        emit(sorted(triple))
                    for d in successors[c]:
                        if d in (a, b, c):
                            continue
                        gap = (headings[a] - headings[d]) % (2.0 * math.pi)
                        if not (lo <= gap <= hi):
                            continue
                        quad = tuple(sorted((a, b, c, d)))
                        if (quad not in seen and blocked(a, b) and blocked(b, c)
                                and blocked(c, d) and blocked(d, a)):
                            seen.add(quad)
                            emit(sorted(quad))
    return candidates


def detect_intersection(field: ClearanceField, point: tuple[float, float],
                        hallway_width: float, config: SimConfig
                        ) -> DetectedIntersection | None:
    """At most one detected and classified intersection at the given point."""
    candidates = candidate_intersections(field, point, hallway_width, config)
    if not candidates:
        return None
    best = min(candidates, key=_Candidate.sort_key)
    return DetectedIntersection(
        location=best.point, type=TYPE_BY_SIZE[best.size],
        hallways=best.members, score=best.score, scale=best.scale)


def register_detection(qmap: QualitativeMap, detection: DetectedIntersection,
                       suppress_radius: float = 2.0
                       ) -> RegisteredIntersection | None:
    """Register a detection unless one already exists nearby."""
    for reg in qmap.vertices.values():
        if dist(detection.location, reg.location) <= suppress_radius:
            return None
    reg = RegisteredIntersection(
        id=qmap.fresh_id(), location=detection.location,
        first_location=detection.location, type=detection.type,
        hallways=[Hallway(qmap.fresh_id(), t.heading, t.target)
                  for t in detection.hallways],
        scale=detection.scale)
    qmap.vertices[reg.id] = reg
    return reg


def refine_intersection(field: ClearanceField, qmap: QualitativeMap,
                        reg: RegisteredIntersection,
                        robot_point: tuple[float, float],
                        hallway_width: float, config: SimConfig) -> bool | None:
    """Re-detect from a 3x3 pose grid around the registered location.

    Updates location (capped to a total shift from the first registration),
    type, and hallway identities: old and new hallways are corresponded by
    minimum-cost assignment on angular distance with edges below the cutoff;
    unmatched old hallways deactivate but keep their ids. Returns None when
    the robot is too far to refine, False when nothing was redetected (the
    map maintenance loop removes chronic misses), True when refined.
    """
    if dist(robot_point, reg.location) > config.refine_radius:
        return None
    spacing = config.refine_grid_spacing
    pool: list[_Candidate] = []
    for dx in (-spacing, 0.0, spacing):
        for dy in (-spacing, 0.0, spacing):
            p = (reg.location[0] + dx, reg.location[1] + dy)
            pool.extend(candidate_intersections(field, p, hallway_width, config))
    if not pool:
        return False
    best = min(pool, key=_Candidate.sort_key)

    new_location = best.point
    shift = dist(new_location, reg.first_location)
    cap = config.max_location_shift
    if shift > cap:
        fx, fy = reg.first_location
        new_location = (fx + (new_location[0] - fx) * cap / shift,
                        fy + (new_location[1] - fy) * cap / shift)
    reg.location = new_location
    reg.type = TYPE_BY_SIZE[best.size]
    reg.scale = best.scale

    old = reg.hallways
    new = list(best.members)
    cost = [[math.degrees(abs(_ang_dist(h.heading, t.heading))) for t in new]
            for h in old]
    pairs = hungarian_assign(cost, max_edge=config.hallway_match_max_deg) \
        if old and new else []
    matched_old = {r for (r, _) in pairs}
    matched_new = {c for (_, c) in pairs}
    for r, c in pairs:
        old[r].heading = new[c].heading
        old[r].target = new[c].target
        old[r].active = True
    for i, h in enumerate(old):
        if i not in matched_old:
            h.active = False
    for j, t in enumerate(new):
        if j not in matched_new:
            reg.hallways.append(Hallway(qmap.fresh_id(), t.heading, t.target))
    return True


def _ang_dist(a: float, b: float) -> float:
    d = (norm_angle(a) - norm_angle(b)) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)
