"""Forward driving goals: cone searches about the hallway orientation.

The forward orientation starts as the robot heading when it begins driving
down a hallway and, after 2 m of travel, becomes the bearing from the start
point to the current position, which tracks the hallway axis even while the
robot swerves around obstacles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..config import SimConfig
from ..geometry import angle_dist, bearing, dist, signed_angle_diff
from .trajectories import ClearanceField, Trajectory, drivability_matrix, heading_of


@dataclass
class ForwardContext:
    forward_orientation: float
    start_point: tuple[float, float]
    goals_issued: int = 0

    def update(self, position: tuple[float, float]) -> None:
        if dist(self.start_point, position) >= 2.0:
            self.forward_orientation = bearing(self.start_point, position)


def _cone_schedule(goals_issued: int) -> list[float]:
    if goals_issued == 0:
        return [15.0, 30.0, 45.0]
    if goals_issued == 1:
        return [15.0, 30.0]
    return [15.0]


def _median_in_cone(maximal: list[Trajectory], orientation: float,
                    half_angle_deg: float) -> Trajectory | None:
    half = math.radians(half_angle_deg)
    members = [t for t in maximal
               if angle_dist(t.heading, orientation) <= half]
    if not members:
        return None
    members.sort(key=lambda t: signed_angle_diff(t.heading, orientation))
    return members[(len(members) - 1) // 2]


def forward_driving_goal(maximal: list[Trajectory], ctx: ForwardContext
                         ) -> Trajectory | None:
    """Median maximal drivable trajectory in the first non-empty cone."""
    for half in _cone_schedule(ctx.goals_issued):
        goal = _median_in_cone(maximal, ctx.forward_orientation, half)
        if goal is not None:
            return goal
    return None


def _maximal_from_point(field: ClearanceField, point: tuple[float, float],
                        config: SimConfig) -> list[Trajectory]:
    matrix = drivability_matrix(field, point, config)
    distances = config.trajectory_distances
    out = []
    for hi in range(config.n_headings):
        best = -1
        for di in range(len(distances)):
            if matrix[di, hi]:
                best = di
        if best >= 0:
            h = heading_of(hi, config.n_headings)
            d = distances[best]
            out.append(Trajectory(d, h, (point[0] + d * math.cos(h),
                                         point[1] + d * math.sin(h))))
    return out


def lateral_recovery_goal(field: ClearanceField, position: tuple[float, float],
                          ctx: ForwardContext, config: SimConfig
                          ) -> Trajectory | None:
    """Repeat the cone search from poses offset sideways from the robot.

    Offsets alternate left then right at 0.5, 1.0, and 1.5 m; the first
    offset that yields a goal wins.
    """
    left = ctx.forward_orientation + math.pi / 2.0
    for magnitude in (0.5, 1.0, 1.5):
        for sign in (1.0, -1.0):
            p = (position[0] + sign * magnitude * math.cos(left),
                 position[1] + sign * magnitude * math.sin(left))
            maximal = _maximal_from_point(field, p, config)
            goal = forward_driving_goal(maximal, ctx)
            if goal is not None:
                return goal
    return None
