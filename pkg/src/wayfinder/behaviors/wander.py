"""The exploration behavior: drive hallways, pick fresh directions at
intersections, recover from dead ends, all while the tracker looks for
people.

Substates: make a decision, rotate recovery (360 spin), rotate, drive
forward, and drive through an intersection. Hallway choices prefer unvisited
hallways (seeded-random pick), then the least recently visited.
"""

from __future__ import annotations

import math

from ..config import SimConfig
from ..geometry import angle_dist, dist, norm_angle, signed_angle_diff
from ..nav.goals import ForwardContext, forward_driving_goal, lateral_recovery_goal

MAKE_DECISION = "Make_decision"
ROTATE_RECOVERY = "Rotate_recovery"
ROTATE = "Rotate"
DRIVE_FORWARD = "Drive_forward"
DRIVE_THROUGH = "Drive_through_intersection"

ROTATE_DONE_TOL = math.radians(3.0)
GOAL_REISSUE_RANGE = 2.5


class Wander:
    def __init__(self, config: SimConfig, rng):
        self.config = config
        self.rng = rng
        self.sub = MAKE_DECISION
        self.ctx: ForwardContext | None = None
        self.rotate_target: float | None = None
        self.after_rotate = DRIVE_FORWARD
        self.spin_targets: list[float] = []
        self.goal = None
        self.through_entry: tuple[tuple[float, float], str | None] | None = None
        self.last_decided: int | None = None

    # ------------------------------------------------------------------

    def step(self, inputs) -> tuple[dict | None, list[dict]]:
        events: list[dict] = []
        handler = {
            MAKE_DECISION: self._make_decision,
            ROTATE_RECOVERY: self._rotate_recovery,
            ROTATE: self._rotate,
            DRIVE_FORWARD: self._drive_forward,
            DRIVE_THROUGH: self._drive_through,
        }[self.sub]
        motion = handler(inputs, events)
        return motion, events

    def _go(self, sub: str, events: list[dict]) -> None:
        if sub != self.sub:
            events.append({"kind": "substate", "behavior": "Wander",
                           "to": sub})
            self.sub = sub

    def _reset_forward(self, inputs) -> None:
        self.ctx = ForwardContext(forward_orientation=inputs.pose.heading,
                                  start_point=inputs.pose.point)
        self.goal = None

    # ------------------------------------------------------------------

    def _make_decision(self, inputs, events):
        nav = inputs.nav
        pose = inputs.pose
        reg = nav.registered_near(pose.point, self.config.suppress_radius)
        if reg is not None and reg.id != self.last_decided \
                and reg.active_hallways():
            self.last_decided = reg.id
            entry = min(reg.active_hallways(),
                        key=lambda h: dist(pose.point, h.target))
            entry.visited_at = inputs.time
            actives = reg.active_hallways()
            unvisited = [h for h in actives if h.visited_at is None]
            if unvisited:
                chosen = unvisited[int(self.rng.integers(len(unvisited)))]
            else:
                chosen = min(actives, key=lambda h: h.visited_at)
            chosen.visited_at = inputs.time
            events.append({"kind": "decision", "behavior": "Wander",
                           "intersection": reg.id, "hallway": chosen.id})
            if angle_dist(chosen.heading, pose.heading) <= math.radians(15.0):
                self.through_entry = (pose.point, reg.type)
                self._reset_forward(inputs)
                self._go(DRIVE_THROUGH, events)
            else:
                self.rotate_target = chosen.heading
                self.after_rotate = DRIVE_THROUGH
                self.through_entry = (pose.point, reg.type)
                self._go(ROTATE, events)
            return None

        labels = set(inputs.nav.sets.qualitative) if inputs.nav.sets else set()
        open_ahead = labels & {"forward", "left", "right",
                               "forward-left", "forward-right"}
        if open_ahead:
            self._reset_forward(inputs)
            self._go(DRIVE_FORWARD, events)
            return None
        self.spin_targets = self._spin_plan(pose.heading)
        self._go(ROTATE_RECOVERY, events)
        return None

    def _spin_plan(self, heading: float) -> list[float]:
        return [norm_angle(heading + k * math.pi / 2.0) for k in (1, 2, 3, 4)]

    def _rotate_recovery(self, inputs, events):
        pose = inputs.pose
        if self.spin_targets:
            target = self.spin_targets[0]
            if angle_dist(pose.heading, target) <= ROTATE_DONE_TOL:
                self.spin_targets.pop(0)
                if not self.spin_targets:
                    return None  # decide on the freshly spun map next tick
            return {"kind": "rotate", "heading": self.spin_targets[0]
                    if self.spin_targets else pose.heading}
        sets = inputs.nav.sets
        if sets is None or not sets.qualitative:
            self.spin_targets = self._spin_plan(pose.heading)
            return {"kind": "rotate", "heading": self.spin_targets[0]}
        recovery = min(sets.qualitative.values(),
                       key=lambda t: angle_dist(t.heading, pose.heading))
        self.rotate_target = recovery.heading
        self.after_rotate = DRIVE_FORWARD
        self._go(ROTATE, events)
        return None

    def _rotate(self, inputs, events):
        pose = inputs.pose
        if angle_dist(pose.heading, self.rotate_target) <= ROTATE_DONE_TOL:
            if self.after_rotate == DRIVE_THROUGH:
                self._reset_forward(inputs)
                self._go(DRIVE_THROUGH, events)
            else:
                self._reset_forward(inputs)
                self._go(DRIVE_FORWARD, events)
            return None
        return {"kind": "rotate", "heading": self.rotate_target}

    def _drive_forward(self, inputs, events):
        pose = inputs.pose
        nav = inputs.nav
        self.ctx.update(pose.point)
        reg = nav.registered_near(pose.point, self.config.suppress_radius)
        if reg is not None and reg.id != self.last_decided:
            self._go(MAKE_DECISION, events)
            return None
        # Forward motion falls back to lateral recovery around blockers; the
        # verification spin runs only when nothing at all is drivable.
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
                self.goal = None
                self.last_decided = None
                self.spin_targets = self._spin_plan(pose.heading)
                self._go(ROTATE_RECOVERY, events)
                return None
            if self.goal is None or goal.target != self.goal.target:
                self.ctx.goals_issued += 1
                events.append({"kind": "goal", "behavior": "Wander",
                               "target": list(goal.target)})
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
            self._reset_forward(inputs)
            self._go(DRIVE_FORWARD, events)
            return None
        return self._forward_motion(inputs, events)
