"""Common-sense door search: parity, expected index, and trend reasoning.

Room numbers run consecutively odd on one side of a hallway and even on the
other. The first tag read pins which side the goal is on; same-side reads
walk toward the expected index, and the range and trend of all reads decide
when the goal must have been missed, triggering an exhaustive sweep from the
hallway start.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .clustering import DoorCluster

TAG_PATTERN = re.compile(r"^([A-Za-z]*)(\d+)([A-Za-z]?)$")
CONFUSION_FIXES = str.maketrans({"o": "0", "O": "0", "i": "1", "I": "1",
                                 "S": "5"})


@dataclass(frozen=True)
class ParsedTag:
    prefix: str
    number: int
    suffix: str


def normalize_tag(text: str) -> str:
    """Undo the common single-character misreads inside the numeric body."""
    match = TAG_PATTERN.match(text.strip())
    if match is not None:
        return text.strip()
    # Substitute confusable letters and retry; keep the original on failure.
    fixed = text.strip().translate(CONFUSION_FIXES)
    return fixed if TAG_PATTERN.match(fixed) else text.strip()


def parse_tag(text: str) -> ParsedTag | None:
    match = TAG_PATTERN.match(normalize_tag(text))
    if match is None:
        return None
    prefix, digits, suffix = match.groups()
    return ParsedTag(prefix.lower(), int(digits), suffix.lower())


def tags_equal(read: str, goal: str, normalize: bool = True) -> bool:
    if normalize:
        a, b = parse_tag(read), parse_tag(goal)
        if a is not None and b is not None:
            return a == b
        return normalize_tag(read).lower() == normalize_tag(goal).lower()
    return read.strip().lower() == goal.strip().lower()


@dataclass(frozen=True)
class SearchAction:
    kind: str               # inspect / return-to-start-exhaustive /
                            # fail-to-wander / success
    side: str | None = None
    index: int | None = None


def door_driving_goals(cluster: DoorCluster, robot_point: tuple[float, float]
                       ) -> tuple[tuple[float, float, float],
                                  tuple[float, float, float]]:
    """Two goals 1 m perpendicular from the near and far posts, facing the
    door; requires a well-observed cluster."""
    if cluster.count <= 3:
        raise ValueError("cluster too small for driving goals")
    (x_min, y_min), (x_max, y_max) = cluster.post_min, cluster.post_max
    if math.hypot(x_max - x_min, y_max - y_min) < 1e-9:
        raise ValueError("degenerate zero-width cluster")
    theta = math.atan2(y_max - y_min, x_max - x_min)
    normal = theta + math.pi / 2.0
    nx, ny = math.cos(normal), math.sin(normal)
    # Offset on the robot's side of the door.
    cx, cy = cluster.center
    if (robot_point[0] - cx) * nx + (robot_point[1] - cy) * ny < 0:
        nx, ny = -nx, -ny
    goals = []
    for (px, py) in (cluster.post_min, cluster.post_max):
        gx, gy = px + nx, py + ny
        facing = math.atan2(py - gy, px - gx)
        goals.append((gx, gy, facing))
    return goals[0], goals[1]


def plan_door_search(goal_tag: str,
                     read_tags: list[tuple[str, str, int]],
                     doors: dict[str, list[DoorCluster]],
                     at_hallway_end: bool,
                     exhaustive: bool = False) -> SearchAction:
    """Pick the next action given every tag read so far.

    ``read_tags`` is ordered (tag text, side, index); ``doors`` maps side to
    the clusters seen so far, index-ordered. In the exhaustive phase the
    caller sweeps every uninspected door; this function then only reports
    success, continuation, or final failure.
    """
    goal = parse_tag(goal_tag)
    if goal is None:
        return SearchAction("fail-to-wander")

    for (text, _, _) in read_tags:
        if tags_equal(text, goal_tag):
            return SearchAction("success")

    inspected = {(side, index) for (_, side, index) in read_tags}

    def next_uninspected(side: str) -> DoorCluster | None:
        for cluster in doors.get(side, []):
            if (cluster.side, cluster.index) not in inspected:
                return cluster
        return None

    if exhaustive:
        for side in doors:
            cluster = next_uninspected(side)
            if cluster is not None:
                return SearchAction("inspect", cluster.side, cluster.index)
        return SearchAction("fail-to-wander")

    parsed = [(parse_tag(text), side, index)
              for (text, side, index) in read_tags]
    parsed = [(p, side, index) for (p, side, index) in parsed if p is not None]

    if parsed:
        goal_side_reads = [(p, side, index) for (p, side, index) in parsed
                           if p.number % 2 == goal.number % 2]
        if goal_side_reads:
            numbers = [p.number for (p, _, _) in goal_side_reads]
            if len(numbers) >= 2:
                ascending = numbers[-1] >= numbers[0]
                last = numbers[-1]
                missed = (goal.number < last) if ascending \
                    else (goal.number > last)
                if missed:
                    return SearchAction("return-to-start-exhaustive")
            side = goal_side_reads[-1][1]
            nxt = next_uninspected(side)
            if nxt is not None:
                return SearchAction("inspect", nxt.side, nxt.index)
            if at_hallway_end:
                return SearchAction("return-to-start-exhaustive")
            return SearchAction("inspect", side, None)  # keep driving
        # Every read so far has the wrong parity: switch sides.
        other = "right" if parsed[-1][1] == "left" else "left"
        nxt = next_uninspected(other)
        if nxt is not None:
            return SearchAction("inspect", nxt.side, nxt.index)
        if at_hallway_end:
            return SearchAction("return-to-start-exhaustive")
        return SearchAction("inspect", other, None)

    if at_hallway_end:
        return SearchAction("return-to-start-exhaustive")
    for side in doors:
        cluster = next_uninspected(side)
        if cluster is not None:
            return SearchAction("inspect", cluster.side, cluster.index)
    return SearchAction("inspect", None, None)
