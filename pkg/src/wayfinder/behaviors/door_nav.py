"""The door-finding behavior: accumulate detections while driving the goal
hallway, inspect doors in common-sense order, and confirm the goal tag.

Detection memory is owned by the behavior instance, so a fresh entry into
the behavior starts with an empty set of door locations.
"""

from __future__ import annotations

import math

from ..config import SimConfig
from ..geometry import angle_dist, bearing, dist, norm_angle
from ..doors.clustering import cluster_detections
from ..doors.proposals import detect_doors
from ..doors.search import SearchAction, plan_door_search, tags_equal
from ..doors.walls import extract_walls
from ..nav.goals import ForwardContext, forward_driving_goal, lateral_recovery_goal

SEEK = "seek"
TO_DOOR = "drive-to-door"
READ = "read"
RETURN_TO_START = "return-to-start"
DONE = "done"
FAILED = "failed"

ARRIVE_TOL = 0.4
FACE_TOL = math.radians(10.0)


class NavigateDoor:
    def __init__(self, config: SimConfig, goal_tag: str, goal_action: str,
                 pose, camera):
        self.config = config
        self.goal_tag = goal_tag
        self.camera = camera
        self.hallway_start = pose.point
        self.hallway_direction = pose.heading
        side = {"goal-L": "left", "goal-R": "right"}.get(goal_action)
        self.side_preference = [side, "right" if side == "left" else "left"] \
            if side else ["left", "right"]
        self.detections = []
        # (tag text, world location of the inspected cluster)
        self.reads: list[tuple[str, tuple[float, float]]] = []
        self.phase = SEEK
        self.exhaustive = False
        self.target: tuple[str, int] | None = None
        self.goal_point: tuple[float, float, float] | None = None
        self.tried_far_post = False
        self.ctx = ForwardContext(forward_orientation=pose.heading,
                                  start_point=pose.point)
        self.goal = None
        self.outcome: str | None = None
        self._cluster_cache = None
        self._entry_path_len = 0
        self._crumb_cursor = None

    # ------------------------------------------------------------------

    def ingest_frame(self, segments, scan, pose, now: float) -> int:
        """Run the detection pipeline on one camera/scan frame."""
        walls = extract_walls(list(scan.points), self.config)
        found = detect_doors(segments, walls, list(scan.points), pose,
                             self.camera, now, self.config)
        self.detections.extend(found)
        return len(found)

    def clusters_by_side(self):
        if self._cluster_cache is not None and \
                self._cluster_cache[0] == len(self.detections):
            return self._cluster_cache[1]
        clusters = cluster_detections(self.detections, self.hallway_start,
                                      self.hallway_direction,
                                      self.config.door_cluster_linkage)
        eligible = [c for c in clusters if c.count > self.config.door_min_cluster]
        by_side: dict[str, list] = {}
        for side in self.side_preference:
            by_side[side] = sorted([c for c in eligible if c.side == side],
                                   key=lambda c: c.index)
        self._cluster_cache = (len(self.detections), by_side)
        return by_side

    def _cluster_at(self, by_side, side, index):
        for c in by_side.get(side, []):
            if c.index == index:
                return c
        return None

    def read_tags(self, by_side) -> list[tuple[str, str, int]]:
        """Reads re-keyed to the current cluster sides/indices.

        Cluster indices shift as new doors come into view, so reads are
        stored by location and mapped to whatever cluster now owns that
        spot.
        """
        out = []
        clusters = [c for side in by_side.values() for c in side]
        for (tag, location) in self.reads:
            owner = None
            best = self.config.door_cluster_linkage + 0.3
            for c in clusters:
                gap = dist(location, c.center)
                if gap < best:
                    best = gap
                    owner = c
            if owner is not None:
                out.append((tag, owner.side, owner.index))
            else:
                out.append((tag, "", -1))
        return out

    def _at_hallway_end(self, inputs) -> bool:
        """Nothing drivable down the hallway, even via lateral recovery."""
        return self._forward_motion(inputs, []) is None

    # ------------------------------------------------------------------

    def step(self, inputs) -> tuple[dict | None, list[dict]]:
        events: list[dict] = []
        if self.phase in (DONE, FAILED):
            return None, events
        by_side = self.clusters_by_side()

        if self.phase == RETURN_TO_START:
            sx, sy = self.hallway_start
            if dist(inputs.pose.point, (sx, sy)) <= 1.0:
                self.phase = SEEK
                self.exhaustive = True
                self.ctx = ForwardContext(
                    forward_orientation=self.hallway_direction,
                    start_point=inputs.pose.point)
                self.goal = None
                events.append({"kind": "door-search", "event": "exhaustive"})
                return None, events
            # Retrace the breadcrumbs laid down since the behavior started.
            crumbs = inputs.nav.path
            if self._crumb_cursor is None:
                self._crumb_cursor = len(crumbs) - 1
            while self._crumb_cursor > self._entry_path_len and \
                    dist(inputs.pose.point,
                         crumbs[self._crumb_cursor]) < 1.0:
                self._crumb_cursor -= 1
            target = crumbs[max(self._entry_path_len - 1,
                                min(self._crumb_cursor, len(crumbs) - 1))] \
                if crumbs else (sx, sy)
            if self._crumb_cursor <= self._entry_path_len and \
                    dist(inputs.pose.point, target) < 1.0:
                target = (sx, sy)
            return {"kind": "drive", "x": target[0], "y": target[1]}, events

        if self.phase == TO_DOOR:
            return self._drive_to_door(inputs, events, by_side)

        if self.phase == READ:
            return self._read(inputs, events, by_side)

        return self._seek(inputs, events, by_side)

    # ------------------------------------------------------------------

    def _decide(self, inputs, by_side) -> SearchAction:
        return plan_door_search(self.goal_tag, self.read_tags(by_side),
                                by_side, self._at_hallway_end(inputs),
                                exhaustive=self.exhaustive)

    def _seek(self, inputs, events, by_side):
        action = self._decide(inputs, by_side)
        if action.kind == "success":
            self.phase = DONE
            self.outcome = "success"
            events.append({"kind": "door-search", "event": "success"})
            return None, events
        if action.kind == "return-to-start-exhaustive":
            if self.exhaustive:
                self.phase = FAILED
                self.outcome = "fail"
                events.append({"kind": "door-search", "event": "exhausted"})
                return None, events
            self.phase = RETURN_TO_START
            self._crumb_cursor = None
            events.append({"kind": "door-search", "event": "return-to-start"})
            return None, events
        if action.kind == "fail-to-wander":
            if self.exhaustive and not self._at_hallway_end(inputs):
                # More doors may still come into view further down.
                return self._forward_motion(inputs, events), events
            self.phase = FAILED
            self.outcome = "fail"
            events.append({"kind": "door-search", "event": "fail"})
            return None, events

        # inspect
        cluster = None
        if action.index is not None:
            cluster = self._cluster_at(by_side, action.side, action.index)
        elif action.side is not None:
            inspected = {(s, i) for (_, s, i) in self.read_tags(by_side)}
            for c in by_side.get(action.side, []):
                if (c.side, c.index) not in inspected:
                    cluster = c
                    break
        if cluster is None or dist(inputs.pose.point, cluster.center) > \
                self.config.door_approach_range:
            motion = self._forward_motion(inputs, events)
            if motion is None and self._at_hallway_end(inputs):
                # Nothing ahead and the target never appeared.
                if self.exhaustive:
                    self.phase = FAILED
                    self.outcome = "fail"
                    events.append({"kind": "door-search", "event": "fail"})
                else:
                    self.phase = RETURN_TO_START
                    events.append({"kind": "door-search",
                                   "event": "return-to-start"})
            return motion, events
        from ..doors.search import door_driving_goals
        near, far = door_driving_goals(cluster, inputs.pose.point)
        self.target = (cluster.side, cluster.index)
        self.goal_point = near
        self._far_point = far
        self.tried_far_post = False
        self.phase = TO_DOOR
        events.append({"kind": "door-search", "event": "inspect",
                       "side": cluster.side, "index": cluster.index})
        return {"kind": "drive", "x": near[0], "y": near[1]}, events

    def _drive_to_door(self, inputs, events, by_side):
        gx, gy, facing = self.goal_point
        pose = inputs.pose
        if dist(pose.point, (gx, gy)) > ARRIVE_TOL:
            return {"kind": "drive", "x": gx, "y": gy}, events
        if angle_dist(pose.heading, facing) > FACE_TOL:
            return {"kind": "rotate", "heading": facing}, events
        self.phase = READ
        return None, events

    def _read(self, inputs, events, by_side):
        tag = inputs.read_tag(inputs.pose)
        side, index = self.target
        if tag == "unreadable" and not self.tried_far_post:
            self.tried_far_post = True
            self.goal_point = self._far_point
            self.phase = TO_DOOR
            return None, events
        cluster = self._cluster_at(by_side, side, index)
        location = cluster.center if cluster is not None else \
            inputs.pose.point
        self.reads.append((tag, location))
        events.append({"kind": "tag-read", "tag": tag, "side": side,
                       "index": index,
                       "matches_goal": tags_equal(
                           tag, self.goal_tag,
                           self.config.tag_normalize_confusions)})
        if tags_equal(tag, self.goal_tag,
                      self.config.tag_normalize_confusions):
            self.phase = DONE
            self.outcome = "success"
            events.append({"kind": "door-search", "event": "success"})
            return None, events
        self.phase = SEEK
        self.goal = None
        # Resume driving down the hallway after stepping away from the door.
        self.ctx = ForwardContext(forward_orientation=self.hallway_direction,
                                  start_point=inputs.pose.point)
        return None, events

    def _forward_motion(self, inputs, events):
        pose = inputs.pose
        self.ctx.update(pose.point)
        if getattr(inputs, "blocked", False):
            self.goal = None
        if self.goal is None or dist(pose.point,
                                     self.goal.target) < 2.0:
            goal = forward_driving_goal(inputs.nav.sets.maximal, self.ctx)
            if goal is None:
                goal = lateral_recovery_goal(inputs.nav.field, pose.point,
                                             self.ctx, self.config)
            if goal is None:
                self.goal = None
                return None
            self.goal = goal
        return {"kind": "drive", "x": self.goal.target[0],
                "y": self.goal.target[1]}
