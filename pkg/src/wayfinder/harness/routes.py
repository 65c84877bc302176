"""Route computation over fixture annotations, and phrasing directions the
way a person would say them.

The annotation graph gives corridor centerlines; a route from the robot to
the goal door's hallway turns into turn-by-turn steps. Turns at dead ends
are phrased "go to the end of the hall and turn ..."; other turns use
ordinals over the turn opportunities passed since the previous turn ("take
your second left"), which round-trips through the dialogue pipeline into
uniquely matchable plan steps.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from ..geometry import angle_dist, bearing, dist, point_segment_distance, \
    signed_angle_diff
from ..simworld.floorplan import FloorPlan

ORDINAL_WORDS = {1: "first", 2: "second", 3: "third", 4: "fourth",
                 5: "fifth", 6: "sixth", 7: "seventh", 8: "eighth"}
TURN_ANGLE = math.radians(40.0)


@dataclass
class RouteGraph:
    nodes: dict[str, tuple[float, float]]
    edges: list[tuple[str, str]]

    @classmethod
    def from_plan(cls, plan: FloorPlan) -> "RouteGraph":
        ann = plan.annotations
        nodes = {k: tuple(v) for k, v in ann.get("nodes", {}).items()}
        edges = [tuple(e) for e in ann.get("edges", [])]
        return cls(nodes, edges)

    def neighbors(self, node: str) -> list[str]:
        out = []
        for (a, b) in self.edges:
            if a == node:
                out.append(b)
            elif b == node:
                out.append(a)
        return out

    def nearest_edge(self, p: tuple[float, float]) -> tuple[str, str]:
        best = None
        best_d = math.inf
        for (a, b) in self.edges:
            d = point_segment_distance(p, self.nodes[a], self.nodes[b])
            if d < best_d:
                best_d = d
                best = (a, b)
        return best

    def shortest_path(self, sources: list[tuple[str, float]],
                      targets: set[str]) -> list[str] | None:
        queue = [(cost, node, [node]) for (node, cost) in sources]
        heapq.heapify(queue)
        seen = set()
        while queue:
            cost, node, path = heapq.heappop(queue)
            if node in targets:
                return path
            if node in seen:
                continue
            seen.add(node)
            for nb in self.neighbors(node):
                if nb not in seen:
                    heapq.heappush(queue, (
                        cost + dist(self.nodes[node], self.nodes[nb]),
                        nb, path + [nb]))
        return None


@dataclass
class RouteStep:
    kind: str            # "start", "turn", "goal"
    direction: str = ""  # forward / turn-around / left / right
    at_end: bool = False
    ordinal: int = 1


def _door_edge(graph: RouteGraph, plan: FloorPlan, goal_tag: str):
    door = next((d for d in plan.doors if d.tag == goal_tag), None)
    if door is None:
        raise ValueError(f"no door tagged {goal_tag!r}")
    return graph.nearest_edge(door.center), door.center


def _offers_side(graph: RouteGraph, node: str, into: float,
                 direction: str) -> bool:
    point = graph.nodes[node]
    for nb in graph.neighbors(node):
        rel = signed_angle_diff(bearing(point, graph.nodes[nb]), into)
        if direction == "left" and TURN_ANGLE < rel < math.radians(140.0):
            return True
        if direction == "right" and -math.radians(140.0) < rel < -TURN_ANGLE:
            return True
    return False


def describe_route(plan: FloorPlan, robot_pose, goal_tag: str
                   ) -> list[RouteStep]:
    """Turn-by-turn steps from the robot pose to the goal door."""
    graph = RouteGraph.from_plan(plan)
    (da, db), door_center = _door_edge(graph, plan, goal_tag)
    start_edge = graph.nearest_edge(robot_pose.point)

    if set(start_edge) == {da, db}:
        # Already in the goal hallway: head along it toward the door.
        hall_dir = bearing(graph.nodes[da], graph.nodes[db])
        along = ((door_center[0] - robot_pose.point[0]) * math.cos(hall_dir)
                 + (door_center[1] - robot_pose.point[1]) * math.sin(hall_dir))
        direction = hall_dir if along >= 0 else (hall_dir + math.pi)
        rel = abs(signed_angle_diff(direction, robot_pose.heading))
        steps = [RouteStep("start", "turn-around"
                           if rel > math.radians(90.0) else "forward")]
        steps.append(_goal_step(robot_pose.point, direction, door_center))
        return steps

    sources = [(n, dist(robot_pose.point, graph.nodes[n]))
               for n in start_edge]
    path = graph.shortest_path(sources, {da, db})
    if path is None:
        raise ValueError("no route to the goal hallway")
    entry = path[-1]
    other = db if entry == da else da

    points = [robot_pose.point] + [graph.nodes[n] for n in path] \
        + [graph.nodes[other]]
    node_of = {i: path[i - 1] for i in range(1, len(points) - 1)}

    first_leg = bearing(points[0], points[1])
    if dist(points[0], points[1]) < 1.0 and len(points) > 2:
        first_leg = bearing(points[1], points[2])
    rel0 = abs(signed_angle_diff(first_leg, robot_pose.heading))
    steps = [RouteStep("start", "turn-around"
                       if rel0 > math.radians(120.0) else "forward")]

    last_turn_i = 0
    for i in range(1, len(points) - 1):
        into = bearing(points[i - 1], points[i])
        out = bearing(points[i], points[i + 1])
        rel = signed_angle_diff(out, into)
        if abs(rel) < TURN_ANGLE:
            continue
        direction = "left" if rel > 0 else "right"
        node = node_of[i]
        has_straight = any(
            angle_dist(bearing(points[i], graph.nodes[nb]), into) < TURN_ANGLE
            for nb in graph.neighbors(node))
        # Turn opportunities on this side passed straight since the last turn.
        passed = 0
        for j in range(last_turn_i + 1, i):
            into_j = bearing(points[j - 1], points[j])
            if _offers_side(graph, node_of[j], into_j, direction):
                passed += 1
        steps.append(RouteStep("turn", direction, at_end=not has_straight,
                               ordinal=passed + 1))
        last_turn_i = i

    final_dir = bearing(points[-2], points[-1])
    steps.append(_goal_step(points[-2], final_dir, door_center))
    return steps


def _goal_step(hall_start, direction, door_center) -> RouteStep:
    cross = (math.cos(direction) * (door_center[1] - hall_start[1])
             - math.sin(direction) * (door_center[0] - hall_start[0]))
    if cross > 0.3:
        return RouteStep("goal", "left")
    if cross < -0.3:
        return RouteStep("goal", "right")
    return RouteStep("goal", "forward")


def phrase_steps(steps: list[RouteStep], goal_tag: str,
                 flip_turns: int = 0) -> str:
    """Render route steps as a person's reply; optionally flip some turns."""
    flipped = 0
    parts: list[str] = []
    for step in steps:
        if step.kind == "start":
            parts.append("turn around" if step.direction == "turn-around"
                         else "go straight")
        elif step.kind == "turn":
            direction = step.direction
            if flipped < flip_turns:
                direction = "right" if direction == "left" else "left"
                flipped += 1
            if step.at_end:
                parts.append(f"go to the end of the hall and turn {direction}")
            elif step.ordinal > 1:
                word = ORDINAL_WORDS.get(step.ordinal, f"{step.ordinal}th")
                parts.append(f"take your {word} {direction}")
            else:
                parts.append(f"turn {direction}")
        else:
            if step.direction == "left":
                parts.append("the door will be on your left")
            elif step.direction == "right":
                parts.append("the door will be on your right")
            else:
                parts.append(f"you will find room {goal_tag}")
    return "yes, " + " then ".join(parts) + "."
