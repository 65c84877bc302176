"""Top-level behavior machine.

Wander looks for a person, Approach_person walks up to one,
Hold_conversation infers a plan, Follow_directions executes it, and
Navigate_door finds the numbered door. Every failure path leads back to
Wander; confirming the goal tag ends the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from ..config import SimConfig
from ..dialogue import conversation_step, start_conversation
from ..geometry import bearing, dist
from .approach import ApproachPerson
from .door_nav import NavigateDoor
from .follow import FollowDirections, preprocess_plan
from .tracking import Tracker
from .wander import Wander

WANDER = "Wander"
APPROACH = "Approach_person"
CONVERSE = "Hold_conversation"
FOLLOW = "Follow_directions"
DOOR = "Navigate_door"
DONE = "Done"

# The legal transition edges of the architecture (used by tests and the
# event log; every emitted transition names one of these).
EDGES = {
    (WANDER, APPROACH): "person found",
    (APPROACH, CONVERSE): "person reached",
    (APPROACH, WANDER): "person lost",
    (CONVERSE, FOLLOW): "plan ready",
    (CONVERSE, WANDER): "conversation failed",
    (FOLLOW, DOOR): "plan complete at goal hallway",
    (FOLLOW, WANDER): "plan failed or person goal",
    (DOOR, DONE): "goal tag confirmed",
    (DOOR, WANDER): "door search failed",
}


@dataclass
class BrainInputs:
    time: float
    pose: Any
    nav: Any
    tracker: Tracker
    scan: Any = None
    segments: Any = None
    read_tag: Callable | None = None
    blocked: bool = False


class Brain:
    def __init__(self, config: SimConfig, goal_tag: str, giver, rng, camera):
        self.config = config
        self.goal_tag = goal_tag
        self.giver = giver
        self.rng = rng
        self.camera = camera
        self.state = WANDER
        self.wander = Wander(config, rng)
        self.approach: ApproachPerson | None = None
        self.follow: FollowDirections | None = None
        self.door: NavigateDoor | None = None
        self.conversation = None
        self._asked_at: float | None = None
        self._closing = False
        self.plan: list[str] | None = None
        self.door_failures = 0
        self.done = False

    # ------------------------------------------------------------------

    def _transition(self, to: str, events: list[dict], reason: str = ""):
        if (self.state, to) not in EDGES and to != self.state:
            raise AssertionError(f"illegal transition {self.state} -> {to}")
        events.append({"kind": "transition", "from": self.state, "to": to,
                       "reason": reason or EDGES.get((self.state, to), "")})
        self.state = to

    def tick(self, inputs: BrainInputs) -> tuple[dict | None, list[dict]]:
        events: list[dict] = []
        handler = {
            WANDER: self._tick_wander,
            APPROACH: self._tick_approach,
            CONVERSE: self._tick_converse,
            FOLLOW: self._tick_follow,
            DOOR: self._tick_door,
            DONE: lambda i, e: None,
        }[self.state]
        motion = handler(inputs, events)
        return motion, events

    # ------------------------------------------------------------------

    def _tick_wander(self, inputs, events):
        motion, sub_events = self.wander.step(inputs)
        events.extend(sub_events)
        approachable = inputs.tracker.approachable(inputs.time)
        if approachable:
            target = min(approachable,
                         key=lambda t: dist(inputs.pose.point, t.position))
            self.approach = ApproachPerson(self.config, target.id)
            self._transition(APPROACH, events)
            return None
        return motion

    def _tick_approach(self, inputs, events):
        motion, sub_events = self.approach.step(inputs)
        events.extend(sub_events)
        for ev in sub_events:
            if ev.get("event") == "reached":
                self._start_conversation(inputs, events)
                return motion
            if ev.get("event") == "lost":
                others = [t for t in inputs.tracker.approachable(inputs.time)
                          if t.id != self.approach.target_id]
                if others:
                    target = min(others, key=lambda t: dist(inputs.pose.point,
                                                            t.position))
                    self.approach = ApproachPerson(self.config, target.id)
                else:
                    self.wander = Wander(self.config, self.rng)
                    self._transition(WANDER, events)
                return None
        return motion

    # ------------------------------------------------------------------

    def _start_conversation(self, inputs, events):
        self._transition(CONVERSE, events)
        self.conversation, out = start_conversation(self.goal_tag)
        self._say(out.say, inputs.time, events)

    def _say(self, text, now, events):
        events.append({"kind": "utterance", "speaker": "robot", "text": text})
        query = self.conversation.last_query
        self.giver.ask(text, query.query_type if query else "open-ended", now)
        self._asked_at = now

    def _tick_converse(self, inputs, events):
        if self.conversation is None or self.conversation.finished:
            return None
        event = self.giver.poll(inputs.time)
        if event is None:
            if inputs.time - self._asked_at >= self.config.conversation_timeout:
                self.conversation, out = conversation_step(
                    self.conversation, {"kind": "timeout"})
                self._handle_conversation_output(out, inputs, events)
            return None
        if event.get("kind") == "utterance":
            events.append({"kind": "utterance", "speaker": "person",
                           "text": event.get("text", "")})
        else:
            events.append({"kind": "conversation-control",
                           "event": event.get("kind")})
        self.conversation, out = conversation_step(self.conversation, event)
        self._handle_conversation_output(out, inputs, events)
        return None

    def _handle_conversation_output(self, out, inputs, events):
        if out.done is not None:
            events.append({"kind": "utterance", "speaker": "robot",
                           "text": out.say})
            events.append({"kind": "plan", "steps": list(out.done)})
            self.plan = out.done
            self.follow = FollowDirections(self.config,
                                           preprocess_plan(out.done))
            self._transition(FOLLOW, events, "plan ready")
        elif out.abort is not None:
            events.append({"kind": "utterance", "speaker": "robot",
                           "text": out.say})
            events.append({"kind": "plan", "steps": list(out.abort),
                           "aborted": True})
            self.plan = out.abort
            self.follow = FollowDirections(self.config,
                                           preprocess_plan(out.abort))
            self._transition(FOLLOW, events, "plan ready")
        elif out.say is not None:
            self._say(out.say, inputs.time, events)

    # ------------------------------------------------------------------

    def _tick_follow(self, inputs, events):
        motion, sub_events = self.follow.step(inputs)
        events.extend(sub_events)
        outcome = self.follow.outcome
        if outcome is None:
            return motion
        if outcome in ("goal-F", "goal-L", "goal-R"):
            self.door = NavigateDoor(self.config, self.goal_tag, outcome,
                                     inputs.pose, self.camera)
            self.door._entry_path_len = len(inputs.nav.path)
            self._transition(DOOR, events)
            return None
        if outcome == "person":
            self.wander = Wander(self.config, self.rng)
            self._transition(WANDER, events, "person goal: seek new person")
            return None
        self.wander = Wander(self.config, self.rng)
        self._transition(WANDER, events, "plan execution failed")
        return None

    def _tick_door(self, inputs, events):
        if inputs.segments is not None and inputs.scan is not None:
            self.door.ingest_frame(inputs.segments, inputs.scan, inputs.pose,
                                   inputs.time)
        motion, sub_events = self.door.step(inputs)
        events.extend(sub_events)
        if self.door.outcome == "success":
            self.done = True
            self._transition(DONE, events)
            return None
        if self.door.outcome == "fail":
            self.door_failures += 1
            self.wander = Wander(self.config, self.rng)
            self._transition(WANDER, events, "door search failed")
            return None
        return motion
