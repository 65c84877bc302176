"""Executing an inferred plan step by step.

Directions rotate or drive, intersection actions are stop conditions matched
against detected intersections, and reaching the goal action hands off to
the door search (or back to exploration for a person goal).
"""

from __future__ import annotations

import math

from ..config import SimConfig
from ..dialogue.actions import is_dir, is_goal, is_int
from ..dialogue.validate import COMPLETE, validate_plan
from ..geometry import angle_dist, dist, norm_angle
from ..nav.goals import ForwardContext, forward_driving_goal, lateral_recovery_goal
from ..nav.trajectories import qualitative_label

MAKE_DECISION = "Make_decision"
DRIVE_FORWARD = "Drive_forward"
ROTATE = "Rotate"
DRIVE_THROUGH = "Drive_through_intersection"
COMPLETE_SUB = "Complete"

ROTATE_DONE_TOL = math.radians(3.0)
GOAL_REISSUE_RANGE = 2.5
THROUGH_INT = "forward-through-int"


def preprocess_plan(plan: list[str]) -> list[str]:
    """Insert drive-through steps after every intersection turn but the last.

    Keeps the robot from matching the intersection it is still standing in
    as the next stop condition.
    """
    if validate_plan(plan) != COMPLETE:
        raise ValueError("plan must be complete and consistent")
    pairs = [i for i in range(len(plan) - 1)
             if is_int(plan[i]) and is_dir(plan[i + 1])]
    out = list(plan)
    for i in reversed(pairs[:-1] if len(pairs) > 1 else []):
        out[i + 2:i + 2] = [THROUGH_INT, "forward"]
    return out


def hallway_labels(intersection, pose) -> set[str]:
    """Qualitative labels of the active hallways relative to the pose."""
    halls = getattr(intersection, "active_hallways", None)
    halls = halls() if callable(halls) else intersection.hallways
    return {qualitative_label(h.heading, pose.heading) for h in halls}


def match_intersection(intersection, action: str, pose) -> bool:
    """Does a detected/registered intersection satisfy an int action?"""
    if not is_int(action):
        raise ValueError(f"not an intersection action: {action!r}")
    if intersection is None:
        return False
    if action in ("elbow", "three-way", "four-way"):
        return intersection.type == action
    labels = hallway_labels(intersection, pose)
    turn = bool(labels & {"left", "right"})
    if action == "int-L":
        return "left" in labels
    if action == "int-R":
        return "right" in labels
    if action == "int-F":
        return turn and "forward" in labels
    if action == "end":
        return turn and "forward" not in labels
    return False


class FollowDirections:
    def __init__(self, config: SimConfig, plan: list[str]):
        self.config = config
        self.plan = list(plan)
        self.counter = 0
        self.sub = MAKE_DECISION
        self.ctx: ForwardContext | None = None
        self.goal = None
        self.rotate_target: float | None = None
        self.through_entry = None
        self.target_int: str | None = None
        self.consume_on_match = 1
        self.spin_targets: list[float] = []
        self.spun_for_dead_end = False
        self.outcome: str | None = None

    # ------------------------------------------------------------------

    def step(self, inputs) -> tuple[dict | None, list[dict]]:
        events: list[dict] = []
        handler = {
            MAKE_DECISION: self._make_decision,
            DRIVE_FORWARD: self._drive_forward,
            ROTATE: self._rotate,
            DRIVE_THROUGH: self._drive_through,
            COMPLETE_SUB: lambda i, e: None,
        }[self.sub]
        motion = handler(inputs, events)
        return motion, events

    def _go(self, sub, events):
        if sub != self.sub:
            events.append({"kind": "substate",
                           "behavior": "Follow_directions", "to": sub})
            self.sub = sub

    def _advance(self, steps, events):
        self.counter += steps
        events.append({"kind": "plan-step",
                       "counter": self.counter,
                       "remaining": self.plan[self.counter:]})

    def _fail(self, events, reason):
        self.outcome = "fail"
        events.append({"kind": "follow-outcome", "outcome": "fail",
                       "reason": reason})
        self._go(COMPLETE_SUB, events)

    def _reset_forward(self, inputs):
        self.ctx = ForwardContext(forward_orientation=inputs.pose.heading,
                                  start_point=inputs.pose.point)
        self.goal = None
        self.spun_for_dead_end = False

    # ------------------------------------------------------------------

    def _make_decision(self, inputs, events):
        if self.counter >= len(self.plan):
            self._fail(events, "ran out of plan steps")
            return None
        action = self.plan[self.counter]
        if is_goal(action):
            self.outcome = action
            events.append({"kind": "follow-outcome", "outcome": action})
            self._go(COMPLETE_SUB, events)
            return None
        if action == THROUGH_INT:
            reg = inputs.nav.registered_near(inputs.pose.point,
                                             self.config.suppress_radius)
            entry_type = reg.type if reg is not None else None
            self.through_entry = (inputs.pose.point, entry_type)
            self._reset_forward(inputs)
            self._go(DRIVE_THROUGH, events)
            return None
        if action == "forward":
            nxt = self.plan[self.counter + 1] \
                if self.counter + 1 < len(self.plan) else None
            if nxt is None:
                self._fail(events, "forward with no stop condition")
                return None
            if is_int(nxt):
                self.target_int = nxt
                self.consume_on_match = 2
                self._reset_forward(inputs)
                self._go(DRIVE_FORWARD, events)
                return None
            # The forward before a through step or a goal costs no motion.
            self._advance(1, events)
            return None
        if is_int(action):
            self.target_int = action
            self.consume_on_match = 1
            self._reset_forward(inputs)
            self._go(DRIVE_FORWARD, events)
            return None
        if is_dir(action):
            # Turns that follow an intersection happen at its center, so the
            # robot first closes in on the registered location.
            if self.counter > 0 and is_int(self.plan[self.counter - 1]):
                reg = inputs.nav.registered_near(inputs.pose.point,
                                                 self.config.suppress_radius)
                if reg is not None and dist(inputs.pose.point,
                                            reg.location) > 0.5:
                    return {"kind": "drive", "x": reg.location[0],
                            "y": reg.location[1]}
            self.rotate_target = self._rotation_target(inputs, action)
            self._go(ROTATE, events)
            return None
        self._fail(events, f"unexpected action {action!r}")
        return None

    def _rotation_target(self, inputs, action: str) -> float:
        pose = inputs.pose
        if action == "either":
            reg = inputs.nav.registered_near(pose.point,
                                             self.config.suppress_radius)
            side = "left"
            if reg is not None:
                labels = hallway_labels(reg, pose)
                side = "left" if "left" in labels else "right"
            action = side
        nominal = {
            "left": pose.heading + math.pi / 2.0,
            "right": pose.heading - math.pi / 2.0,
            "turn-around": pose.heading + math.pi,
            "forward": pose.heading,
        }[action]
        reg = inputs.nav.registered_near(pose.point,
                                         self.config.suppress_radius)
        if reg is not None:
            snapped = [h.heading for h in reg.active_hallways()
                       if angle_dist(h.heading, nominal) <= math.radians(15.0)]
            if snapped:
                return snapped[0]
        return norm_angle(nominal)

    def _rotate(self, inputs, events):
        if angle_dist(inputs.pose.heading,
                      self.rotate_target) <= ROTATE_DONE_TOL:
            self._advance(1, events)
            self._go(MAKE_DECISION, events)
            return None
        return {"kind": "rotate", "heading": self.rotate_target}

    def _matched_intersection(self, inputs):
        pose = inputs.pose
        # An end-of-hall cannot be somewhere the robot can still drive
        # forward; the live qualitative set guards against intersection
        # artifacts matching too eagerly mid-hallway.
        if self.target_int == "end" and inputs.nav.sets is not None \
                and "forward" in inputs.nav.sets.qualitative:
            return None
        reg = inputs.nav.registered_near(pose.point, 1.8)
        if reg is not None and match_intersection(reg, self.target_int, pose):
            return reg
        raw = inputs.nav.raw_detection
        if raw is not None and match_intersection(raw, self.target_int, pose):
            return raw
        return None

    def _drive_forward(self, inputs, events):
        pose = inputs.pose
        self.ctx.update(pose.point)
        if self.spin_targets:
            target = self.spin_targets[0]
            if angle_dist(pose.heading, target) <= ROTATE_DONE_TOL:
                self.spin_targets.pop(0)
                if not self.spin_targets:
                    if self._matched_intersection(inputs) is not None:
                        self._advance(self.consume_on_match, events)
                        self._go(MAKE_DECISION, events)
                        return None
                    self._fail(events,
                               f"no {self.target_int} before the dead end")
                    return None
            if self.spin_targets:
                return {"kind": "rotate", "heading": self.spin_targets[0]}
            return None
        if self._matched_intersection(inputs) is not None:
            self._advance(self.consume_on_match, events)
            self._go(MAKE_DECISION, events)
            return None
        # Forward motion (with lateral recovery around blockers) decides
        # whether this is a dead end: only when nothing is drivable does the
        # verification spin run.
        return self._forward_motion(inputs, events)

    def _forward_motion(self, inputs, events):
        pose = inputs.pose
        if getattr(inputs, "blocked", False):
            self.goal = None
        if self.goal is None or dist(pose.point,
                                     self.goal.target) < GOAL_REISSUE_RANGE:
            goal = forward_driving_goal(inputs.nav.sets.maximal, self.ctx)
            if goal is None:
                goal = lateral_recovery_goal(inputs.nav.field, pose.point,
                                             self.ctx, self.config)
            if goal is None:
                if self.spun_for_dead_end:
                    self._fail(events,
                               f"no {self.target_int} before the dead end")
                    return None
                self.spun_for_dead_end = True
                self.spin_targets = [
                    norm_angle(pose.heading + k * math.pi / 2.0)
                    for k in (1, 2, 3, 4)]
                events.append({"kind": "substate",
                               "behavior": "Follow_directions",
                               "to": "verification-spin"})
                return {"kind": "rotate", "heading": self.spin_targets[0]}
            if self.goal is None or goal.target != self.goal.target:
                self.ctx.goals_issued += 1
            self.goal = goal
        return {"kind": "drive", "x": self.goal.target[0],
                "y": self.goal.target[1]}

    def _drive_through(self, inputs, events):
        pose = inputs.pose
        self.ctx.update(pose.point)
        entry_point, entry_type = self.through_entry
        traveled = dist(pose.point, entry_point)
        raw = inputs.nav.raw_detection
        raw_type = raw.type if raw is not None else None
        if traveled > 2.0 and raw_type != entry_type:
            self._advance(1, events)
            self._go(MAKE_DECISION, events)
            return None
        return self._forward_motion(inputs, events)
