"""Qualitative map: registered intersections and hallway-path edges."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..geometry import dist


@dataclass
class Hallway:
    id: int
    heading: float
    target: tuple[float, float]
    active: bool = True
    visited_at: float | None = None


@dataclass
class RegisteredIntersection:
    id: int
    location: tuple[float, float]
    first_location: tuple[float, float]
    type: str
    hallways: list[Hallway]
    scale: float
    misses: int = 0  # consecutive refinements that found nothing

    def active_hallways(self) -> list[Hallway]:
        return [h for h in self.hallways if h.active]


@dataclass
class Edge:
    int_a: int
    hall_a: int
    int_b: int
    hall_b: int
    weight: float


@dataclass
class QualitativeMap:
    vertices: dict[int, RegisteredIntersection] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    last_visited: int | None = None
    _next_id: int = 0

    def fresh_id(self) -> int:
        self._next_id += 1
        return self._next_id

    def nearest_vertex(self, p: tuple[float, float]
                       ) -> RegisteredIntersection | None:
        best = None
        best_d = math.inf
        for reg in self.vertices.values():
            d = dist(p, reg.location)
            if d < best_d:
                best, best_d = reg, d
        return best

    def remove_vertex(self, vertex_id: int) -> None:
        self.vertices.pop(vertex_id, None)
        self.edges = [e for e in self.edges
                      if vertex_id not in (e.int_a, e.int_b)]
        if self.last_visited == vertex_id:
            self.last_visited = None

    def hallway_in_edge(self, hall_id: int) -> bool:
        return any(hall_id in (e.hall_a, e.hall_b) for e in self.edges)

    def edge_between(self, int_a: int, int_b: int) -> Edge | None:
        for e in self.edges:
            if {e.int_a, e.int_b} == {int_a, int_b}:
                return e
        return None

    def to_dict(self) -> dict:
        return {
            "vertices": [
                {
                    "id": reg.id,
                    "location": list(reg.location),
                    "type": reg.type,
                    "scale": reg.scale,
                    "hallways": [
                        {"id": h.id, "heading": h.heading,
                         "target": list(h.target), "active": h.active,
                         "visited_at": h.visited_at}
                        for h in reg.hallways
                    ],
                }
                for reg in self.vertices.values()
            ],
            "edges": [
                {"int_a": e.int_a, "hall_a": e.hall_a,
                 "int_b": e.int_b, "hall_b": e.hall_b, "weight": e.weight}
                for e in self.edges
            ],
        }

    def export_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def update_graph_on_visit(qmap: QualitativeMap,
                          robot_path: list[tuple[float, float]],
                          reg: RegisteredIntersection,
                          now: float,
                          link_radius: float = 3.0) -> Hallway | None:
    """Stamp the entry hallway and link an edge back to the previous visit.

    The robot path is searched backward for a point near a hallway target of
    the previously visited intersection; when found, an edge joins the two
    hallway ids with the Euclidean distance between intersection locations
    as its weight.
    """
    if not robot_path:
        return None
    here = robot_path[-1]
    candidates = reg.active_hallways() or reg.hallways
    if not candidates:
        return None
    entry = min(candidates, key=lambda h: dist(here, h.target))
    entry.visited_at = now

    prev_id = qmap.last_visited
    qmap.last_visited = reg.id
    if prev_id is None or prev_id == reg.id or prev_id not in qmap.vertices:
        return entry
    prev = qmap.vertices[prev_id]
    linked: Hallway | None = None
    for p in reversed(robot_path):
        best = None
        best_d = math.inf
        for h in prev.hallways:
            d = dist(p, h.target)
            if d < best_d:
                best, best_d = h, d
        if best is not None and best_d <= link_radius:
            linked = best
            break
    if linked is None:
        return entry
    if qmap.hallway_in_edge(linked.id) or qmap.hallway_in_edge(entry.id):
        return entry
    if qmap.edge_between(prev.id, reg.id) is not None:
        return entry
    qmap.edges.append(Edge(prev.id, linked.id, reg.id, entry.id,
                           dist(prev.location, reg.location)))
    return entry
