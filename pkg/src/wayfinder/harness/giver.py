"""Direction-giver policies standing in for the person.

A scripted giver replays canned responses in order (with optional keyed
entries and control markers); the oracle giver derives correct directions
from the floor-plan annotations at query time, optionally corrupting a
number of turns to exercise recovery.
"""

from __future__ import annotations

import json
from pathlib import Path

from .routes import describe_route, phrase_steps

SILENCE = "<silence>"
MISUNDERSTOOD = "<misunderstood>"
START_OVER = "<start-over>"


class ScriptedGiver:
    """Sequential scripted responses.

    The script is a JSON object: {"responses": [...]} where each entry is a
    string (consumed in order) or {"query_contains": ..., "response": ...}
    (matched against the query first, reusable). The silence marker makes
    the giver stay quiet so the timeout path runs.
    """

    def __init__(self, script: dict, response_delay: float = 1.0):
        entries = script.get("responses", [])
        self.sequence = [e for e in entries if isinstance(e, str)]
        self.keyed = [e for e in entries if isinstance(e, dict)]
        self.cursor = 0
        self.response_delay = response_delay
        self._pending: tuple[float, str] | None = None

    @classmethod
    def load(cls, path: str | Path, response_delay: float = 1.0):
        return cls(json.loads(Path(path).read_text(encoding="utf-8")),
                   response_delay)

    def ask(self, query_text: str, query_type: str, t: float) -> None:
        for entry in self.keyed:
            if entry.get("query_contains", "") in query_text:
                self._schedule(entry["response"], t)
                return
        if self.cursor < len(self.sequence):
            response = self.sequence[self.cursor]
            self.cursor += 1
            self._schedule(response, t)
        else:
            self._pending = None  # silence

    def _schedule(self, response: str, t: float) -> None:
        if response == SILENCE:
            self._pending = None
        else:
            self._pending = (t + self.response_delay, response)

    def poll(self, t: float) -> dict | None:
        if self._pending is None:
            return None
        due, response = self._pending
        if t < due:
            return None
        self._pending = None
        if response == MISUNDERSTOOD:
            return {"kind": "misunderstood"}
        if response == START_OVER:
            return {"kind": "start-over"}
        return {"kind": "utterance", "text": response}


class OracleGiver:
    """Answers with correct directions computed from the fixture
    annotations and the robot's pose at query time."""

    def __init__(self, plan, goal_tag: str, pose_fn,
                 response_delay: float = 1.0, wrong_turns: int = 0):
        self.plan = plan
        self.goal_tag = goal_tag
        self.pose_fn = pose_fn
        self.response_delay = response_delay
        self.wrong_turns = wrong_turns
        self._conversations = 0
        self._pending: tuple[float, str] | None = None

    def ask(self, query_text: str, query_type: str, t: float) -> None:
        if "navigate to" in query_text:
            self._conversations += 1
            # Only the first set of directions carries injected errors.
            flips = self.wrong_turns if self._conversations == 1 else 0
            steps = describe_route(self.plan, self.pose_fn(), self.goal_tag)
            self._pending = (t + self.response_delay,
                             phrase_steps(steps, self.goal_tag, flips))
        elif query_type == "single":
            steps = describe_route(self.plan, self.pose_fn(), self.goal_tag)
            self._pending = (t + self.response_delay,
                             phrase_steps(steps, self.goal_tag, 0))
        else:
            # Follow-up about a later step: restate the remaining route.
            steps = describe_route(self.plan, self.pose_fn(), self.goal_tag)
            self._pending = (t + self.response_delay,
                             phrase_steps(steps, self.goal_tag, 0))

    def poll(self, t: float) -> dict | None:
        if self._pending is None:
            return None
        due, response = self._pending
        if t < due:
            return None
        self._pending = None
        return {"kind": "utterance", "text": response}
