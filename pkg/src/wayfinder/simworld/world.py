"""Ground-truth world: kinematics, LiDAR, persons, cameras, and door tags.

Everything here is deterministic given (floor plan, seed, command stream).
The world owns simulated time; consumers read at tick boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import SimConfig
from ..geometry import (
    SegmentSet,
    angle_dist,
    bearing,
    dist,
    norm_angle,
    ray_circle_intersection,
    signed_angle_diff,
)
from ..rng import TrialRandom
from .floorplan import FloorPlan, Pose

CONFUSION_TABLE = {"0": "o", "o": "0", "1": "i", "i": "1", "5": "S", "S": "5"}


@dataclass(frozen=True)
class Scan:
    points: tuple[tuple[float, float], ...]
    origin: Pose
    timestamp: float


@dataclass(frozen=True)
class ImageSegment:
    u1: float
    v1: float
    u2: float
    v2: float


@dataclass(frozen=True)
class MotionResult:
    pose: Pose
    blocked: bool = False


class CameraModel:
    """Pinhole camera rigidly mounted at the robot origin, facing its heading."""

    def __init__(self, width: int = 1280, height: int = 720,
                 hfov_deg: float = 90.0, mount_height: float = 1.0):
        self.width = width
        self.height = height
        self.hfov = math.radians(hfov_deg)
        if not 0.0 < self.hfov < math.pi:
            raise ValueError("horizontal field of view must be in (0, pi)")
        self.mount_height = mount_height
        self.f = (width / 2.0) / math.tan(self.hfov / 2.0)
        self.cx = width / 2.0
        self.cy = height / 2.0
        self.K = np.array([[self.f, 0.0, self.cx],
                           [0.0, self.f, self.cy],
                           [0.0, 0.0, 1.0]])

    def extrinsics(self, pose: Pose) -> tuple[np.ndarray, np.ndarray]:
        """World-to-camera rotation R and translation t for a robot pose.

        Camera axes: z forward along the heading, x right, y down.
        World axes: x/y on the floor, z up.
        """
        c, s = math.cos(pose.heading), math.sin(pose.heading)
        R = np.array([[s, -c, 0.0],
                      [0.0, 0.0, -1.0],
                      [c, s, 0.0]])
        cam_pos = np.array([pose.x, pose.y, self.mount_height])
        t = -R @ cam_pos
        return R, t

    def project(self, pose: Pose, points_world: np.ndarray
                ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Project Nx3 world points; returns (u, v, depth)."""
        R, t = self.extrinsics(pose)
        cam = points_world @ R.T + t
        depth = cam[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            u = self.f * cam[:, 0] / depth + self.cx
            v = self.f * cam[:, 1] / depth + self.cy
        return u, v, depth

    def in_fov(self, pose: Pose, p: tuple[float, float]) -> bool:
        rel = signed_angle_diff(bearing(pose.point, p), pose.heading)
        return abs(rel) <= self.hfov / 2.0


@dataclass
class _PersonState:
    script_index: int
    position: tuple[float, float]
    waypoints: list[tuple[float, float, float]]
    next_wp: int = 0
    last_moved_at: float = 0.0
    history: list[tuple[float, float]] = field(default_factory=list)

    def stationary_for(self, now: float) -> float:
        return now - self.last_moved_at


class World:
    """Single-writer world state advanced by the simulation clock."""

    def __init__(self, plan: FloorPlan, config: SimConfig | None = None,
                 rng: TrialRandom | None = None):
        self.plan = plan
        self.config = config or SimConfig()
        self.rng = rng or TrialRandom(0)
        self.walls = SegmentSet(plan.walls)
        self.time = 0.0
        self.persons = [
            _PersonState(i, tuple(p.position), list(p.waypoints))
            for i, p in enumerate(plan.persons)
        ]

    # ------------------------------------------------------------------
    # Time and persons

    def step(self, dt: float) -> None:
        if dt <= 0:
            raise ValueError("dt must be positive")
        for person in self.persons:
            self._step_person(person, dt)
        self.time += dt

    def _step_person(self, person: _PersonState, dt: float) -> None:
        if person.next_wp >= len(person.waypoints):
            return
        tx, ty, speed = person.waypoints[person.next_wp]
        if speed <= 0.0:
            person.next_wp += 1
            return
        px, py = person.position
        gap = math.hypot(tx - px, ty - py)
        step = speed * dt
        if step >= gap:
            person.position = (tx, ty)
            person.next_wp += 1
        else:
            person.position = (px + (tx - px) / gap * step,
                               py + (ty - py) / gap * step)
        person.last_moved_at = self.time

    def _obstacle_discs(self) -> list[tuple[float, float, float]]:
        """Person discs that currently register as obstacles."""
        discs = []
        for person in self.persons:
            if person.stationary_for(self.time) >= self.config.person_imprint_after:
                discs.append((person.position[0], person.position[1],
                              self.config.person_disc_radius))
        return discs

    # ------------------------------------------------------------------
    # LiDAR

    def lidar_scan(self, pose: Pose, n_beams: int | None = None) -> Scan:
        if not self.plan.contains(pose.point):
            raise ValueError("pose outside floor-plan bounds")
        n = n_beams or self.config.n_beams
        headings = norm_angle(pose.heading) + 2.0 * math.pi * np.arange(n) / n
        ranges = self.walls.cast(pose.point, headings, self.config.lidar_max_range)
        for (cx, cy, r) in self._obstacle_discs():
            for i in range(n):
                hit = ray_circle_intersection(pose.point, float(headings[i]),
                                              (cx, cy), r)
                if hit is not None and hit < ranges[i]:
                    ranges[i] = hit
        sigma = self.config.lidar_noise_sigma
        if sigma > 0.0:
            noise = self.rng.stream("lidar").normal(0.0, sigma, size=n)
            ranges = np.where(np.isfinite(ranges), ranges + noise, ranges)
        points = []
        for i in range(n):
            if math.isfinite(ranges[i]):
                h = float(headings[i])
                points.append((pose.x + ranges[i] * math.cos(h),
                               pose.y + ranges[i] * math.sin(h)))
        return Scan(points=tuple(points), origin=pose, timestamp=self.time)

    # ------------------------------------------------------------------
    # Motion

    def step_robot(self, pose: Pose, command: dict, dt: float) -> MotionResult:
        """Advance the robot toward a drive/rotate command for dt seconds.

        Motion never penetrates walls: it stops at the standoff distance and
        the result is flagged blocked.
        """
        if dt <= 0:
            raise ValueError("dt must be positive")
        kind = command.get("kind")
        if kind == "rotate":
            target = norm_angle(float(command["heading"]))
            delta = signed_angle_diff(target, pose.heading)
            step = self.config.angular_speed * dt
            if abs(delta) <= step:
                heading = target
            else:
                heading = pose.heading + math.copysign(step, delta)
            return MotionResult(Pose(pose.x, pose.y, heading))
        if kind != "drive":
            raise ValueError(f"unknown command kind: {kind!r}")

        target = (float(command["x"]), float(command["y"]))
        gap = dist(pose.point, target)
        desired = bearing(pose.point, target) if gap > 1e-9 else pose.heading
        delta = signed_angle_diff(desired, pose.heading)
        turn = self.config.angular_speed * dt
        if abs(delta) <= turn:
            heading = desired
        else:
            heading = norm_angle(pose.heading + math.copysign(turn, delta))
        if abs(signed_angle_diff(desired, heading)) > math.radians(30.0):
            return MotionResult(Pose(pose.x, pose.y, heading))

        travel = min(self.config.linear_speed * dt, gap)
        if travel <= 0.0:
            return MotionResult(Pose(pose.x, pose.y, heading))
        # Stand-in for a local path planner: try the direct direction, then
        # slide to headings rotated off it, taking the first safe one that
        # still makes progress toward the target.
        for offset_deg in (0.0, 20.0, -20.0, 40.0, -40.0, 60.0, -60.0,
                           75.0, -75.0, 90.0, -90.0):
            direction = desired + math.radians(offset_deg)
            end, ok = self._walk(pose.point, direction, travel)
            if ok and dist(end, target) < gap - 1e-9:
                return MotionResult(Pose(end[0], end[1], heading))
        # Wedged in or near the standoff band: back straight away from the
        # nearest wall, which the clearance rule always permits.
        if self.walls.min_distance(pose.point) < \
                self.config.wall_standoff + 0.05:
            away = self._away_from_walls(pose.point)
            if away is not None:
                end, _ = self._walk(pose.point, away, travel)
                if dist(end, pose.point) > 1e-6:
                    return MotionResult(Pose(end[0], end[1], heading),
                                        blocked=True)
        end, _ = self._walk(pose.point, desired, travel)
        return MotionResult(Pose(end[0], end[1], heading), blocked=True)

    def _away_from_walls(self, p: tuple[float, float]) -> float | None:
        """Direction of steepest clearance increase, probed on a ring."""
        best = None
        base = self.walls.min_distance(p)
        for k in range(16):
            direction = 2.0 * math.pi * k / 16.0
            q = (p[0] + 0.06 * math.cos(direction),
                 p[1] + 0.06 * math.sin(direction))
            gain = self.walls.min_distance(q) - base
            if best is None or gain > best[0]:
                best = (gain, direction)
        if best is None or best[0] <= 0.0:
            return None
        return best[1]

    def _walk(self, start: tuple[float, float], direction: float,
              travel: float) -> tuple[tuple[float, float], bool]:
        """March along a direction; stop where the standoff would be broken.

        Motion that increases wall clearance is allowed even inside the
        standoff band so the robot can always back out of a tight spot.
        """
        substep = self.config.grid_resolution / 2.0
        n_sub = max(1, int(math.ceil(travel / substep)))
        x, y = start
        dx = math.cos(direction)
        dy = math.sin(direction)
        clearance = self.walls.min_distance((x, y))
        for i in range(1, n_sub + 1):
            step_len = travel * i / n_sub
            nx = start[0] + dx * step_len
            ny = start[1] + dy * step_len
            next_clearance = self.walls.min_distance((nx, ny))
            if not self.plan.contains((nx, ny)):
                return (x, y), False
            if next_clearance < self.config.wall_standoff and \
                    next_clearance <= clearance + 1e-9:
                return (x, y), False
            x, y = nx, ny
            clearance = next_clearance
        return (x, y), True

    # ------------------------------------------------------------------
    # Person perception

    def visible_persons(self, pose: Pose, camera: CameraModel
                        ) -> list[tuple[tuple[float, float], float]]:
        """Scripted persons inside the fov with a clear line of sight."""
        out = []
        noise = self.config.person_detect_noise
        gen = self.rng.stream("person-detect")
        for person in self.persons:
            p = person.position
            if not camera.in_fov(pose, p):
                continue
            if self._line_of_sight_blocked(pose.point, p):
                continue
            gap = dist(pose.point, p)
            radius = min(self.config.person_disc_radius, gap)
            # Nearest point of the person to the robot.
            b = bearing(p, pose.point)
            nearest = (p[0] + radius * math.cos(b), p[1] + radius * math.sin(b))
            if noise > 0.0:
                nearest = (nearest[0] + gen.normal(0.0, noise),
                           nearest[1] + gen.normal(0.0, noise))
            out.append((nearest, self.time))
        return out

    def _line_of_sight_blocked(self, p: tuple[float, float],
                               q: tuple[float, float]) -> bool:
        gap = dist(p, q)
        if gap < 1e-9:
            return False
        # Pull the far end back a hair so targets on walls stay visible.
        t = max(0.0, (gap - 0.01) / gap)
        q_test = (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)
        return self.walls.segment_blocked(p, q_test)

    # ------------------------------------------------------------------
    # Synthesized line segments (stand-in for an image line detector)

    def visible_line_segments(self, pose: Pose, camera: CameraModel
                              ) -> list[ImageSegment]:
        if not self.plan.contains(pose.point):
            raise ValueError("pose outside floor-plan bounds")
        segs_3d: list[tuple[tuple[float, float, float], tuple[float, float, float]]] = []
        lintel = self.config.door_lintel_height
        for door in self.plan.doors:
            for post in (door.post_a, door.post_b):
                if self._point_visible(pose, camera, post):
                    segs_3d.append(((post[0], post[1], 0.0),
                                    (post[0], post[1], lintel)))
            if (self._point_visible(pose, camera, door.post_a)
                    and self._point_visible(pose, camera, door.post_b)):
                segs_3d.append(((door.post_a[0], door.post_a[1], lintel),
                                (door.post_b[0], door.post_b[1], lintel)))
        band = self.config.wall_band_height
        for (x1, y1, x2, y2) in self.plan.walls:
            for piece in self._visible_pieces(pose, camera, (x1, y1), (x2, y2)):
                (ax, ay), (bx, by) = piece
                segs_3d.append(((ax, ay, 0.0), (bx, by, 0.0)))
                segs_3d.append(((ax, ay, band), (bx, by, band)))

        out: list[ImageSegment] = []
        gen = self.rng.stream("segments")
        drop = self.config.segment_drop_prob
        for (a, b) in segs_3d:
            projected = self._project_segment(pose, camera, a, b)
            if projected is None:
                continue
            for piece in self._fragment(projected, gen, drop):
                out.append(piece)
        return out

    def _point_visible(self, pose: Pose, camera: CameraModel,
                       p: tuple[float, float]) -> bool:
        return (camera.in_fov(pose, p)
                and not self._line_of_sight_blocked(pose.point, p))

    def _visible_pieces(self, pose: Pose, camera: CameraModel,
                        a: tuple[float, float], b: tuple[float, float]
                        ) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        """Split a floor segment into maximal pieces visible from the pose."""
        n = max(2, int(dist(a, b) / 0.25) + 1)
        ts = np.linspace(0.0, 1.0, n + 1)
        pts = [(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t) for t in ts]
        visible = [self._point_visible(pose, camera, p) for p in pts]
        pieces = []
        start = None
        for i, vis in enumerate(visible):
            if vis and start is None:
                start = i
            elif not vis and start is not None:
                if i - 1 > start:
                    pieces.append((pts[start], pts[i - 1]))
                start = None
        if start is not None and len(pts) - 1 > start:
            pieces.append((pts[start], pts[-1]))
        return pieces

    def _project_segment(self, pose: Pose, camera: CameraModel,
                         a: tuple[float, float, float],
                         b: tuple[float, float, float]) -> ImageSegment | None:
        pts = np.array([a, b], dtype=float)
        u, v, depth = camera.project(pose, pts)
        if depth[0] <= 0.05 or depth[1] <= 0.05:
            return None
        if max(u) < 0 or min(u) > camera.width:
            return None
        return ImageSegment(float(u[0]), float(v[0]), float(u[1]), float(v[1]))

    def _fragment(self, seg: ImageSegment, gen: np.random.Generator,
                  drop: float) -> list[ImageSegment]:
        n_pieces = int(gen.integers(1, 4))
        cuts = np.sort(gen.uniform(0.0, 1.0, size=n_pieces - 1)) if n_pieces > 1 else np.array([])
        edges = np.concatenate([[0.0], cuts, [1.0]])
        pieces = []
        for i in range(n_pieces):
            if gen.uniform() < drop:
                continue
            t0, t1 = edges[i], edges[i + 1]
            pieces.append(ImageSegment(
                seg.u1 + (seg.u2 - seg.u1) * t0, seg.v1 + (seg.v2 - seg.v1) * t0,
                seg.u1 + (seg.u2 - seg.u1) * t1, seg.v1 + (seg.v2 - seg.v1) * t1))
        return pieces

    # ------------------------------------------------------------------
    # Door tags

    def read_door_tag(self, pose: Pose, door_id: int) -> str:
        door = self.plan.doors[door_id]
        center = door.center
        if dist(pose.point, center) > self.config.tag_read_range:
            return "unreadable"
        if angle_dist(bearing(pose.point, center), pose.heading) > math.radians(
                self.config.tag_read_angle_deg):
            return "unreadable"
        tag = door.tag
        prob = self.config.tag_misread_prob
        if prob > 0.0:
            gen = self.rng.stream("ocr")
            tag = "".join(
                CONFUSION_TABLE[ch] if ch in CONFUSION_TABLE and gen.uniform() < prob
                else ch
                for ch in tag)
        return tag
