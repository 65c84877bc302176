"""Driving up to an approachable person, hailing and introducing on the way.

The driving goal sits just short of the person on the robot-to-person ray,
re-issued only when it moves appreciably so the approach stays smooth.
"""

from __future__ import annotations

import math

from ..config import SimConfig
from ..geometry import bearing, dist
from .tracking import APPROACHING, Tracker, WALKING_AWAY, classify_track

HAIL_TEXT = "Hello! Could you help me find a room?"
INTRO_TEXT = "Hi, I am a navigation robot looking for a room."


class ApproachPerson:
    def __init__(self, config: SimConfig, target_id: int):
        self.config = config
        self.target_id = target_id
        self.goal: tuple[float, float] | None = None
        self.hailed = False
        self.introduced = False

    def _track(self, tracker: Tracker):
        for t in tracker.tracks:
            if t.id == self.target_id:
                return t
        return None

    def step(self, inputs) -> tuple[dict | None, list[dict]]:
        events: list[dict] = []
        cfg = self.config
        track = self._track(inputs.tracker)
        if track is None or classify_track(track, inputs.time,
                                           cfg) == WALKING_AWAY:
            events.append({"kind": "approach", "event": "lost",
                           "track": self.target_id})
            return None, events
        person = track.position
        pose = inputs.pose
        gap = dist(pose.point, person)
        if (self.hailed is False and gap <= cfg.approach_hail_range
                and classify_track(track, inputs.time, cfg) == APPROACHING):
            self.hailed = True
            events.append({"kind": "approach", "event": "hail",
                           "text": HAIL_TEXT})
        if not self.introduced and gap <= cfg.approach_intro_range:
            self.introduced = True
            events.append({"kind": "approach", "event": "introduce",
                           "text": INTRO_TEXT})
        if gap <= cfg.approach_stop + 1e-9:
            events.append({"kind": "approach", "event": "reached",
                           "track": self.target_id})
            return {"kind": "rotate",
                    "heading": bearing(pose.point, person)}, events
        heading = bearing(pose.point, person)
        candidate = (person[0] - cfg.approach_stop * math.cos(heading),
                     person[1] - cfg.approach_stop * math.sin(heading))
        if self.goal is None or dist(candidate,
                                     self.goal) >= cfg.approach_goal_update:
            self.goal = candidate
            events.append({"kind": "goal", "behavior": "Approach_person",
                           "target": list(candidate)})
        return {"kind": "drive", "x": self.goal[0], "y": self.goal[1]}, events
