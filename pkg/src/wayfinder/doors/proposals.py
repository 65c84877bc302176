"""Door proposals from image line segments within wall regions.

Vertical segments become candidate posts, localized in the world through the
nearest projected scan point, clustered, and paired by plausible door width.
Each proposal is scored by how much of its two posts and top bar the
detected segments cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..config import SimConfig
from ..geometry import dist, point_segment_distance
from .projection import WallRegion

# An upright camera images vertical structures at constant column, so the
# post bin is tight; receding wall edges are steep but not exactly vertical.
VERTICAL_MAX_SLOPE_DEG = 2.0
VERTICAL_MAX_DU_PX = 4.0
ZERO_SLOPE_MAX_DEG = 20.0       # within this of horizontal counts as flat
POST_TO_WALL_MAX = 0.4          # m, post must localize near the region wall


@dataclass(frozen=True)
class DoorProposal:
    left_line: tuple[float, float, float, float]    # u1, v1, u2, v2
    right_line: tuple[float, float, float, float]
    left_world: tuple[float, float]
    right_world: tuple[float, float]
    width: float
    c_left: float = 0.0
    c_right: float = 0.0
    c_top: float = 0.0
    score: float = 0.0


@dataclass(frozen=True)
class DoorDetection:
    proposal: DoorProposal
    center: tuple[float, float]
    score: float
    timestamp: float


def segment_bins(segments, image_height: float):
    """Split segments into vertical / positive / negative / flat groups.

    Sloped and flat bins only consider the top half of the image, where door
    tops live.
    """
    vertical, positive, negative, flat = [], [], [], []
    for s in segments:
        du = s.u2 - s.u1
        dv = s.v2 - s.v1
        if math.hypot(du, dv) < 1e-9:
            continue
        angle = math.degrees(math.atan2(abs(du), abs(dv)))  # 0 = vertical
        if angle <= VERTICAL_MAX_SLOPE_DEG and abs(du) <= VERTICAL_MAX_DU_PX:
            vertical.append(s)
            continue
        if min(s.v1, s.v2) > image_height / 2.0:
            continue
        slope_angle = math.degrees(math.atan2(-dv, du))  # image v grows down
        if abs(slope_angle) <= ZERO_SLOPE_MAX_DEG or \
                abs(abs(slope_angle) - 180.0) <= ZERO_SLOPE_MAX_DEG:
            flat.append(s)
        elif (slope_angle > 0) == (du > 0):
            positive.append(s)
        else:
            negative.append(s)
    return vertical, positive, negative, flat


def _project_scan(scan_points, pose, camera):
    pts = np.array([[p[0], p[1], 0.0] for p in scan_points])
    u, v, depth = camera.project(pose, pts)
    ok = depth > 0.1
    return [(float(u[i]), scan_points[i]) for i in range(len(scan_points))
            if ok[i]]


def _localize(u: float, projected_scan) -> tuple[float, float] | None:
    best = None
    best_gap = None
    for (su, point) in projected_scan:
        gap = abs(su - u)
        if best_gap is None or gap < best_gap:
            best_gap = gap
            best = point
    return best


def propose_doors(segments, regions: list[WallRegion], scan_points,
                  pose, camera, config: SimConfig | None = None
                  ) -> list[DoorProposal]:
    config = config or SimConfig()
    vertical, _, _, _ = segment_bins(segments, camera.height)
    projected_scan = _project_scan(scan_points, pose, camera)
    if not projected_scan:
        return []
    lo_w, hi_w = config.door_width_range
    proposals: list[DoorProposal] = []
    for region in regions:
        u_lo, u_hi = region.u_range
        in_region = [s for s in vertical
                     if u_lo <= (s.u1 + s.u2) / 2.0 <= u_hi]
        posts = []  # (u, world point)
        (wx1, wy1), (wx2, wy2) = region.world_span
        for s in in_region:
            u = (s.u1 + s.u2) / 2.0
            world = _localize(u, projected_scan)
            if world is None:
                continue
            # Door posts live in the wall plane of their region.
            if point_segment_distance(world, (wx1, wy1),
                                      (wx2, wy2)) > POST_TO_WALL_MAX:
                continue
            posts.append((u, world))
        if len(posts) < 2:
            continue
        clusters = _cluster_posts(posts, config.post_cluster_dist)
        lines = []
        for group in clusters:
            u_avg = sum(posts[i][0] for i in group) / len(group)
            wx = sum(posts[i][1][0] for i in group) / len(group)
            wy = sum(posts[i][1][1] for i in group) / len(group)
            v_top = region.boundary_v(u_avg, "top")
            v_bot = region.boundary_v(u_avg, "bottom")
            lines.append(((u_avg, v_top, u_avg, v_bot), (wx, wy)))
        lines.sort(key=lambda entry: entry[0][0])
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                width = dist(lines[i][1], lines[j][1])
                if lo_w <= width <= hi_w:
                    proposals.append(DoorProposal(
                        left_line=lines[i][0], right_line=lines[j][0],
                        left_world=lines[i][1], right_world=lines[j][1],
                        width=width))
    return proposals


def _cluster_posts(posts, threshold):
    clusters: list[list[int]] = []
    for i, (_, world) in enumerate(posts):
        placed = False
        for group in clusters:
            if any(dist(world, posts[k][1]) <= threshold for k in group):
                group.append(i)
                placed = True
                break
        if not placed:
            clusters.append([i])
    return clusters


def interval_union_length(intervals: list[tuple[float, float]]) -> float:
    """Total length covered by a set of possibly overlapping intervals."""
    pruned = sorted((lo, hi) for (lo, hi) in intervals if hi > lo)
    total = 0.0
    current_lo = None
    current_hi = None
    for lo, hi in pruned:
        if current_hi is None or lo > current_hi:
            if current_hi is not None:
                total += current_hi - current_lo
            current_lo, current_hi = lo, hi
        else:
            current_hi = max(current_hi, hi)
    if current_hi is not None:
        total += current_hi - current_lo
    return total


def _post_coverage(post_line, segments, max_gap_px: float) -> float:
    u = post_line[0]
    v_lo = min(post_line[1], post_line[3])
    v_hi = max(post_line[1], post_line[3])
    if v_hi - v_lo < 1e-9:
        return 0.0
    spans = []
    for s in segments:
        if abs((s.u1 + s.u2) / 2.0 - u) > max_gap_px:
            continue
        lo = max(v_lo, min(s.v1, s.v2))
        hi = min(v_hi, max(s.v1, s.v2))
        if hi > lo:
            spans.append((lo, hi))
    return min(1.0, interval_union_length(spans) / (v_hi - v_lo))


def _top_coverage(proposal: DoorProposal, region: WallRegion, candidates,
                  extension_px: float) -> float:
    """Fraction of the top bar covered by segments matching the region-top
    orientation and lying within its tolerance band."""
    u_lo = min(proposal.left_line[0], proposal.right_line[0])
    u_hi = max(proposal.left_line[0], proposal.right_line[0])
    if u_hi - u_lo < 1e-9:
        return 0.0
    tu1, tv1, tu2, tv2 = region.top
    top_angle = math.atan2(tv2 - tv1, tu2 - tu1) % math.pi
    spans = []
    for s in candidates:
        du, dv = s.u2 - s.u1, s.v2 - s.v1
        if math.hypot(du, dv) < 1e-9:
            continue
        angle = math.atan2(dv, du) % math.pi
        gap = abs(angle - top_angle) % math.pi
        if min(gap, math.pi - gap) > math.radians(15.0):
            continue
        mid_u = (s.u1 + s.u2) / 2.0
        expected_v = region.boundary_v(mid_u, "top")
        tol = region.tolerance_at(mid_u)
        if abs((s.v1 + s.v2) / 2.0 - expected_v) > tol:
            continue
        s_lo, s_hi = sorted((s.u1, s.u2))
        if s_hi < u_lo - extension_px or s_lo > u_hi + extension_px:
            continue
        lo = max(u_lo, s_lo)
        hi = min(u_hi, s_hi)
        if hi > lo:
            spans.append((lo, hi))
    return min(1.0, interval_union_length(spans) / (u_hi - u_lo))


def score_proposal(proposal: DoorProposal, segments, region: WallRegion,
                   pose, camera, config: SimConfig | None = None
                   ) -> DoorProposal:
    """Fill in post/top coverages and the averaged confidence score."""
    config = config or SimConfig()
    vertical, positive, negative, flat = segment_bins(segments, camera.height)
    depth = max(0.3, dist(pose.point, proposal.left_world))
    px_per_m = camera.f / depth
    c_left = _post_coverage(proposal.left_line, vertical,
                            config.post_coverage_dist * px_per_m)
    c_right = _post_coverage(proposal.right_line, vertical,
                             config.post_coverage_dist * px_per_m)
    c_top = _top_coverage(proposal, region, positive + negative + flat,
                          0.15 * px_per_m)
    score = (c_left + c_right + c_top) / 3.0
    return DoorProposal(
        left_line=proposal.left_line, right_line=proposal.right_line,
        left_world=proposal.left_world, right_world=proposal.right_world,
        width=proposal.width, c_left=c_left, c_right=c_right, c_top=c_top,
        score=score)


def detect_doors(segments, walls, scan_points, pose, camera, now: float,
                 config: SimConfig | None = None) -> list[DoorDetection]:
    """Full per-frame pipeline: regions, proposals, scoring, thresholding."""
    from .projection import project_wall_region

    config = config or SimConfig()
    regions = []
    for wall in walls:
        region = project_wall_region(wall, pose, camera, config)
        if region is not None:
            regions.append(region)
    detections = []
    for region in regions:
        for proposal in propose_doors(segments, [region], scan_points, pose,
                                      camera, config):
            scored = score_proposal(proposal, segments, region, pose, camera,
                                    config)
            if scored.score >= config.door_score_threshold:
                center = ((scored.left_world[0] + scored.right_world[0]) / 2,
                          (scored.left_world[1] + scored.right_world[1]) / 2)
                detections.append(DoorDetection(scored, center, scored.score,
                                                now))
    return detections
