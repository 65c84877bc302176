"""Seeded end-to-end trial execution.

One trial drives the simulation clock with a fixed subsystem order per
tick: world, scans into the mapper, the navigation loop, person detection
and tracking, the behavior machine, then motion. Identical configuration
reproduces an identical event stream byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from ..behaviors import Brain, BrainInputs, Tracker
from ..behaviors.fsm import CONVERSE, DONE, DOOR, WANDER
from ..config import SimConfig
from ..mapper import Mapper
from ..nav.loop import NavLoop
from ..rng import TrialRandom
from ..simworld import CameraModel, Pose, World, load_fixture, load_floorplan_file
from ..simworld.floorplan import FloorPlan
from .config import TrialConfig
from .events import EventLog
from .giver import OracleGiver, ScriptedGiver


@dataclass
class TrialRecord:
    config: TrialConfig
    log: EventLog
    outcome: str                  # success | failure
    failure_reason: str | None
    sim_seconds: float
    qmap_export: dict
    path: list[tuple[float, float]]

    @property
    def digest(self) -> str:
        return self.log.digest()

    def behavior_instances(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rec in self.log.of_kind("transition"):
            counts[rec["payload"]["to"]] = counts.get(
                rec["payload"]["to"], 0) + 1
        counts[WANDER] = counts.get(WANDER, 0) + 1  # the initial state
        return counts


def load_plan(ref: str) -> FloorPlan:
    path = Path(ref)
    if path.exists():
        return load_floorplan_file(path)
    return load_fixture(ref)


class Trial:
    def __init__(self, config: TrialConfig, giver=None):
        self.config = config
        self.plan = load_plan(config.floorplan)
        self.sim_config = SimConfig()
        if config.params:
            self.sim_config.apply_overrides(config.params)
        if config.max_sim_seconds is not None:
            self.sim_config.max_sim_seconds = config.max_sim_seconds
        self.rng = TrialRandom(config.seed)
        self.world = World(self.plan, self.sim_config, self.rng)
        self.camera = CameraModel(
            self.sim_config.image_width, self.sim_config.image_height,
            self.sim_config.camera_hfov_deg, self.sim_config.camera_height)
        self.mapper = Mapper(self.sim_config.grid_resolution,
                             self.sim_config.obstacle_sticky_window)
        self.nav = NavLoop(self.plan.hallway_width, self.sim_config)
        self.tracker = Tracker(self.sim_config)
        start = config.start or self.plan.annotations.get("start")
        if start is None:
            raise ValueError("no start pose (config or fixture annotation)")
        self.pose = Pose(start[0], start[1], math.radians(start[2]))
        self.giver = giver or self._build_giver()
        self.brain = Brain(self.sim_config, config.goal_tag, self.giver,
                           self.rng.stream("wander"), self.camera)
        self.log = EventLog()
        self.time = 0.0
        self.segments = None
        self.scan = None
        self.on_tick = None  # hook for the live session service

        if not any(d.tag == config.goal_tag for d in self.plan.doors):
            self.log.emit(0.0, "warning",
                          {"text": f"goal tag {config.goal_tag!r} not in "
                                   "floor plan; failure trial expected"})

    def _build_giver(self):
        delay = self.sim_config.response_delay
        if self.config.giver == "oracle":
            return OracleGiver(self.plan, self.config.goal_tag,
                               lambda: self.pose, delay,
                               self.config.wrong_turns)
        if self.config.giver == "scripted":
            if not self.config.script:
                raise ValueError("scripted giver needs a script path")
            return ScriptedGiver.load(self.config.script, delay)
        raise ValueError(f"unknown giver mode {self.config.giver!r}")

    # ------------------------------------------------------------------

    def run(self) -> TrialRecord:
        cfg = self.sim_config
        dt = 1.0 / cfg.behavior_hz
        scan_every = max(1, round(cfg.behavior_hz / cfg.scan_hz))
        nav_every = max(1, round(cfg.behavior_hz / cfg.nav_hz))
        seg_every = max(1, round(cfg.behavior_hz / cfg.door_pipeline_hz))
        pose_every = int(cfg.behavior_hz)
        self.log.emit(0.0, "config", self.config.to_dict())
        outcome = "failure"
        reason: str | None = "time budget exhausted"
        tick = 0
        blocked = False
        max_ticks = int(cfg.max_sim_seconds * cfg.behavior_hz)
        door_failures_seen = 0
        while tick < max_ticks:
            self.world.step(dt)
            self.time = self.world.time
            tick += 1

            if tick % scan_every == 0:
                self.scan = self.world.lidar_scan(self.pose)
                self.mapper.integrate(self.pose, self.scan)
            if tick % nav_every == 0 and self.mapper.last_pose is not None:
                count_before = len(self.nav.qmap.vertices)
                self.nav.tick(self.mapper.snapshot())
                for reg in list(self.nav.qmap.vertices.values())[count_before:]:
                    self.log.emit(self.time, "intersection", {
                        "id": reg.id, "type": reg.type,
                        "location": [round(v, 3) for v in reg.location]})

            detections = self.world.visible_persons(self.pose, self.camera)
            self.tracker.update(detections, self.pose.point, self.time)
            if detections and tick % pose_every == 0:
                self.log.emit(self.time, "detections",
                              {"count": len(detections)})

            if self.brain.state == DOOR and tick % seg_every == 0:
                self.segments = self.world.visible_line_segments(self.pose,
                                                                 self.camera)
            elif self.brain.state != DOOR:
                self.segments = None

            if self.nav.sets is None:
                motion = None
                events = []
            else:
                inputs = BrainInputs(
                    time=self.time, pose=self.pose, nav=self.nav,
                    tracker=self.tracker, scan=self.scan,
                    segments=self.segments,
                    read_tag=self._read_nearest_tag, blocked=blocked)
                motion, events = self.brain.tick(inputs)
            for event in events:
                self.log.emit(self.time, event.pop("kind"), event)

            if motion is not None:
                result = self.world.step_robot(self.pose, motion, dt)
                self.pose = result.pose
                blocked = result.blocked
            else:
                blocked = False
            if tick % pose_every == 0:
                self.log.emit(self.time, "pose",
                              {"x": round(self.pose.x, 3),
                               "y": round(self.pose.y, 3),
                               "heading": round(self.pose.heading, 4)})
            if self.on_tick is not None:
                self.on_tick(self)

            if self.brain.state == DONE:
                outcome = "success"
                reason = None
                break
            if self.brain.door_failures > door_failures_seen:
                door_failures_seen = self.brain.door_failures
                if door_failures_seen >= cfg.max_door_failures:
                    reason = "door search budget exhausted"
                    break

        self.log.emit(self.time, "trial-end",
                      {"outcome": outcome, "reason": reason})
        return TrialRecord(
            config=self.config, log=self.log, outcome=outcome,
            failure_reason=reason, sim_seconds=self.time,
            qmap_export=self.nav.qmap.to_dict(),
            path=[(round(x, 3), round(y, 3)) for (x, y) in self.nav.path])

    def _read_nearest_tag(self, pose: Pose) -> str:
        best = "unreadable"
        best_gap = math.inf
        for i, door in enumerate(self.plan.doors):
            tag = self.world.read_door_tag(pose, i)
            if tag == "unreadable":
                continue
            gap = math.dist(pose.point, door.center)
            if gap < best_gap:
                best_gap = gap
                best = tag
        self.log.emit(self.time, "tag-read-attempt", {"result": best})
        return best


def run_trial(config: TrialConfig, giver=None) -> TrialRecord:
    return Trial(config, giver).run()
