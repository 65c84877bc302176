"""Trajectory generation over occupancy-grid snapshots.

A trajectory is a drivable target point at a quantized distance and heading.
Distances run in 1.2 m steps up to 7.2 m; headings are the 64 multiples of
360/64 degrees. A trajectory is drivable when no point of the straight path
to the target comes within the robot clearance radius of an obstacle or
unknown cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..config import SimConfig
from ..geometry import signed_angle_diff
from ..mapper import FREE, MapSnapshot, OccupancyGrid

QUALITATIVE_LABELS = (
    "forward", "forward-left", "left", "back-left",
    "back", "back-right", "right", "forward-right",
)


@dataclass(frozen=True)
class Trajectory:
    distance: float
    heading: float
    target: tuple[float, float]
    label: str | None = None


@dataclass
class TrajectorySets:
    potential: list[Trajectory]
    drivable: list[Trajectory]
    maximal: list[Trajectory]
    qualitative: dict[str, Trajectory]


class ClearanceField:
    """Distance-to-nearest-blocked-cell lookups over a grid window.

    Two fields are kept: one treating unknown space as blocking (drivability)
    and one over obstacles alone (scoring).
    """

    def __init__(self, grid: OccupancyGrid, center: tuple[float, float],
                 half_extent: float = 14.0):
        res = grid.resolution
        cx, cy = grid.world_to_cell(center)
        r = int(math.ceil(half_extent / res))
        x0, x1 = cx - r, cx + r + 1
        y0, y1 = cy - r, cy + r + 1
        nx, ny = grid.shape
        sx0, sx1 = max(0, x0), min(nx, x1)
        sy0, sy1 = max(0, y0), min(ny, y1)
        window = np.full((x1 - x0, y1 - y0), 0, dtype=np.uint8)
        if sx1 > sx0 and sy1 > sy0:
            window[sx0 - x0:sx1 - x0, sy0 - y0:sy1 - y0] = \
                grid.cells[sx0:sx1, sy0:sy1]
        self.resolution = res
        self.origin = (grid.origin[0] + x0 * res, grid.origin[1] + y0 * res)
        self.shape = window.shape
        free = window == FREE
        obstacle = window == 2
        # distance_transform_edt measures to the nearest zero entry.
        self.clear_drive = ndimage.distance_transform_edt(free) * res
        self.clear_obstacle = ndimage.distance_transform_edt(~obstacle) * res
        self._free = free

    def _cells(self, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ix = np.floor((xs - self.origin[0]) / self.resolution).astype(int)
        iy = np.floor((ys - self.origin[1]) / self.resolution).astype(int)
        ok = (ix >= 0) & (ix < self.shape[0]) & (iy >= 0) & (iy < self.shape[1])
        return ix, iy, ok

    def drive_clearance(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Clearance from obstacle-or-unknown space, 0 outside the window."""
        ix, iy, ok = self._cells(np.asarray(xs, float), np.asarray(ys, float))
        out = np.zeros(ix.shape, dtype=float)
        out[ok] = self.clear_drive[ix[ok], iy[ok]]
        return out

    def obstacle_clearance(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        ix, iy, ok = self._cells(np.asarray(xs, float), np.asarray(ys, float))
        out = np.zeros(ix.shape, dtype=float)
        out[ok] = self.clear_obstacle[ix[ok], iy[ok]]
        return out

    def obstacle_at(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """True where the cell is a known obstacle."""
        return self.obstacle_clearance(xs, ys) <= 0.0


def drivability_matrix(field: ClearanceField, point: tuple[float, float],
                       config: SimConfig) -> np.ndarray:
    """Boolean (n_distances, n_headings) drivability from an arbitrary point."""
    distances = np.asarray(config.trajectory_distances)
    n_head = config.n_headings
    headings = 2.0 * math.pi * np.arange(n_head) / n_head
    step = config.grid_resolution
    radii = np.arange(step, distances[-1] + step / 2, step)
    xs = point[0] + np.outer(np.cos(headings), radii)
    ys = point[1] + np.outer(np.sin(headings), radii)
    clear = field.drive_clearance(xs.ravel(), ys.ravel()).reshape(n_head, -1)
    ok = clear >= config.robot_clearance
    cum_ok = np.minimum.accumulate(ok, axis=1)
    idx = np.minimum(np.round(distances / step).astype(int) - 1,
                     cum_ok.shape[1] - 1)
    return cum_ok[:, idx].T  # (n_distances, n_headings)


def heading_of(index: int, n_headings: int) -> float:
    return 2.0 * math.pi * index / n_headings


def qualitative_label(heading: float, robot_heading: float) -> str:
    rel = signed_angle_diff(heading, robot_heading)
    sector = int(round(rel / (math.pi / 4.0))) % 8
    return QUALITATIVE_LABELS[sector]


def generate_trajectories(snapshot_or_field, pose, config: SimConfig
                          ) -> TrajectorySets:
    """Build the potential / drivable / maximal / qualitative sets."""
    if isinstance(snapshot_or_field, MapSnapshot):
        field = ClearanceField(snapshot_or_field.grid, pose.point,
                               half_extent=config.trajectory_distances[-1] + 1.0)
    else:
        field = snapshot_or_field
    distances = config.trajectory_distances
    n_head = config.n_headings
    matrix = drivability_matrix(field, pose.point, config)

    potential = []
    drivable = []
    longest = [-1] * n_head
    for di, d in enumerate(distances):
        for hi in range(n_head):
            h = heading_of(hi, n_head)
            target = (pose.point[0] + d * math.cos(h),
                      pose.point[1] + d * math.sin(h))
            traj = Trajectory(d, h, target)
            potential.append(traj)
            if matrix[di, hi]:
                drivable.append(traj)
                longest[hi] = di

    maximal = []
    for hi, di in enumerate(longest):
        if di < 0:
            continue
        d = distances[di]
        h = heading_of(hi, n_head)
        target = (pose.point[0] + d * math.cos(h),
                  pose.point[1] + d * math.sin(h))
        maximal.append(Trajectory(d, h, target,
                                  qualitative_label(h, pose.heading)))

    qualitative: dict[str, Trajectory] = {}
    for sector, label in enumerate(QUALITATIVE_LABELS):
        members = [t for t in maximal if t.label == label]
        if not members:
            continue
        # Sort around the sector center so the back sector's wraparound does
        # not split the ordering.
        center = pose.heading + sector * math.pi / 4.0
        members.sort(key=lambda t: signed_angle_diff(t.heading, center))
        qualitative[label] = members[(len(members) - 1) // 2]

    return TrajectorySets(potential, drivable, maximal, qualitative)
