"""The 1 Hz navigation process: trajectories, detection, registration,
refinement, and graph maintenance, recomputed from map snapshots."""

from __future__ import annotations

from ..config import SimConfig
from ..geometry import dist
from ..mapper import MapSnapshot
from .graph import QualitativeMap, RegisteredIntersection, update_graph_on_visit
from .intersections import DetectedIntersection, detect_intersection, \
    refine_intersection, register_detection
from .trajectories import ClearanceField, TrajectorySets, generate_trajectories


class NavLoop:
    """Single-writer owner of the qualitative map and trajectory sets."""

    def __init__(self, hallway_width: float, config: SimConfig | None = None):
        self.hallway_width = hallway_width
        self.config = config or SimConfig()
        self.qmap = QualitativeMap()
        self.field: ClearanceField | None = None
        self.sets: TrajectorySets | None = None
        self.raw_detection: DetectedIntersection | None = None
        self.path: list[tuple[float, float]] = []
        self._last_refine: dict[int, float] = {}

    def tick(self, snapshot: MapSnapshot) -> None:
        pose = snapshot.pose
        self.path.append(pose.point)
        reach = self.config.trajectory_distances[-1]
        half = max(reach + 1.0, self.config.refine_radius + reach / 2.0)
        self.field = ClearanceField(snapshot.grid, pose.point, half_extent=half)
        self.sets = generate_trajectories(self.field, pose, self.config)
        self.raw_detection = detect_intersection(
            self.field, pose.point, self.hallway_width, self.config)
        if self.raw_detection is not None:
            register_detection(self.qmap, self.raw_detection,
                               self.config.suppress_radius)
        now = snapshot.timestamp
        refined_this_tick = 0
        for reg in list(self.qmap.vertices.values()):
            if refined_this_tick >= 1:
                break
            if dist(pose.point, reg.location) > self.config.refine_radius:
                continue
            if now - self._last_refine.get(reg.id, -1e9) < 3.0:
                continue
            refined_this_tick += 1
            self._last_refine[reg.id] = now
            refined = refine_intersection(self.field, self.qmap, reg,
                                          pose.point, self.hallway_width,
                                          self.config)
            if refined is True:
                reg.misses = 0
            elif refined is False:
                reg.misses += 1
                if reg.misses >= 3:
                    # A registration that keeps failing redetection was a
                    # transient artifact of a partial map: drop it.
                    self.qmap.remove_vertex(reg.id)
        near = self.qmap.nearest_vertex(pose.point)
        if near is not None and dist(pose.point, near.location) <= \
                self.config.visit_radius and self.qmap.last_visited != near.id:
            update_graph_on_visit(self.qmap, self.path, near, now,
                                  self.config.edge_link_radius)

    def registered_near(self, p: tuple[float, float], radius: float
                        ) -> RegisteredIntersection | None:
        reg = self.qmap.nearest_vertex(p)
        if reg is not None and dist(p, reg.location) <= radius:
            return reg
        return None
