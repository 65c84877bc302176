"""Occupancy-grid mapping from LiDAR scans.

Cells are 5 cm squares classified free, obstacle, or unknown. Scans are
integrated by tracing each beam: traversed cells become free, the hit cell
becomes an obstacle. Obstacle marks win over free marks within a single
integration and resist being freed for a short sticky window so that people
appear as obstacles and later clear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .simworld.floorplan import Pose
from .simworld.world import Scan

UNKNOWN = 0
FREE = 1
OBSTACLE = 2

_GROW_MARGIN = 80  # cells appended per growth step


class OccupancyGrid:
    """Dynamic 2D cell lattice. Origin is the world point of cell (0, 0)."""

    def __init__(self, resolution: float = 0.05,
                 origin: tuple[float, float] = (0.0, 0.0),
                 shape: tuple[int, int] = (200, 200)):
        self.resolution = resolution
        self.origin = origin
        self.cells = np.full(shape, UNKNOWN, dtype=np.uint8)
        self.obstacle_stamp = np.full(shape, -np.inf, dtype=float)

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def world_to_cell(self, p: tuple[float, float]) -> tuple[int, int]:
        return (int(math.floor((p[0] - self.origin[0]) / self.resolution)),
                int(math.floor((p[1] - self.origin[1]) / self.resolution)))

    def cell_to_world(self, c: tuple[int, int]) -> tuple[float, float]:
        """Center of a cell in world coordinates."""
        return (self.origin[0] + (c[0] + 0.5) * self.resolution,
                self.origin[1] + (c[1] + 0.5) * self.resolution)

    def classify(self, p: tuple[float, float]) -> int:
        cx, cy = self.world_to_cell(p)
        if 0 <= cx < self.shape[0] and 0 <= cy < self.shape[1]:
            return int(self.cells[cx, cy])
        return UNKNOWN

    def ensure_contains(self, p: tuple[float, float]) -> None:
        cx, cy = self.world_to_cell(p)
        grow_lo_x = max(0, -cx)
        grow_lo_y = max(0, -cy)
        grow_hi_x = max(0, cx - self.shape[0] + 1)
        grow_hi_y = max(0, cy - self.shape[1] + 1)
        if not (grow_lo_x or grow_lo_y or grow_hi_x or grow_hi_y):
            return
        pad_lo_x = grow_lo_x + (_GROW_MARGIN if grow_lo_x else 0)
        pad_lo_y = grow_lo_y + (_GROW_MARGIN if grow_lo_y else 0)
        pad_hi_x = grow_hi_x + (_GROW_MARGIN if grow_hi_x else 0)
        pad_hi_y = grow_hi_y + (_GROW_MARGIN if grow_hi_y else 0)
        self.cells = np.pad(self.cells,
                            ((pad_lo_x, pad_hi_x), (pad_lo_y, pad_hi_y)),
                            constant_values=UNKNOWN)
        self.obstacle_stamp = np.pad(self.obstacle_stamp,
                                     ((pad_lo_x, pad_hi_x), (pad_lo_y, pad_hi_y)),
                                     constant_values=-np.inf)
        self.origin = (self.origin[0] - pad_lo_x * self.resolution,
                       self.origin[1] - pad_lo_y * self.resolution)

    def copy(self) -> "OccupancyGrid":
        dup = OccupancyGrid(self.resolution, self.origin, self.shape)
        dup.cells = self.cells.copy()
        dup.obstacle_stamp = self.obstacle_stamp.copy()
        return dup


@dataclass(frozen=True)
class MapSnapshot:
    grid: OccupancyGrid
    pose: Pose
    timestamp: float


def bresenham_cells(a: tuple[int, int], b: tuple[int, int]) -> list[tuple[int, int]]:
    """All cells on the line from a to b, inclusive."""
    x0, y0 = a
    x1, y1 = b
    cells = []
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        cells.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy
    return cells


def integrate_scan(grid: OccupancyGrid, pose: Pose, scan: Scan,
                   sticky_window: float = 1.0) -> OccupancyGrid:
    """Mark beam-traversed cells free and hit cells obstacle, in place.

    Returns the (possibly reallocated) grid for convenience.
    """
    if dist2(pose, scan.origin) > 1e-12:
        raise ValueError("scan origin must equal the integration pose")
    if not scan.points:
        return grid
    grid.ensure_contains(pose.point)
    for p in scan.points:
        grid.ensure_contains(p)
    start = grid.world_to_cell(pose.point)
    now = scan.timestamp
    free_cells: set[tuple[int, int]] = set()
    hit_cells: list[tuple[int, int]] = []
    for p in scan.points:
        end = grid.world_to_cell(p)
        line = bresenham_cells(start, end)
        free_cells.update(line[:-1])
        hit_cells.append(line[-1])
    for (cx, cy) in free_cells:
        if now - grid.obstacle_stamp[cx, cy] > sticky_window:
            grid.cells[cx, cy] = FREE
    for (cx, cy) in hit_cells:
        grid.cells[cx, cy] = OBSTACLE
        grid.obstacle_stamp[cx, cy] = now
    return grid


def integrate_scan_fast(grid: OccupancyGrid, pose: Pose, scan: Scan,
                        sticky_window: float = 1.0) -> OccupancyGrid:
    """Vectorized variant of integrate_scan for the live mapping loop.

    Beams are sampled at half-cell steps instead of walked cell-by-cell; the
    marked free set matches the exact traversal to within corner-clip cells.
    """
    if dist2(pose, scan.origin) > 1e-12:
        raise ValueError("scan origin must equal the integration pose")
    if not scan.points:
        return grid
    grid.ensure_contains(pose.point)
    for p in scan.points:
        grid.ensure_contains(p)
    res = grid.resolution
    origin = np.array(pose.point)
    pts = np.asarray(scan.points, dtype=float)
    vecs = pts - origin
    lens = np.hypot(vecs[:, 0], vecs[:, 1])
    lens[lens < 1e-9] = 1e-9
    step = res / 2.0
    ks = np.arange(0.0, float(lens.max()) + step, step)
    mask = ks[None, :] <= lens[:, None]
    dirs = vecs / lens[:, None]
    xs = (origin[0] + dirs[:, 0:1] * ks[None, :])[mask]
    ys = (origin[1] + dirs[:, 1:2] * ks[None, :])[mask]
    ix = np.floor((xs - grid.origin[0]) / res).astype(np.int64)
    iy = np.floor((ys - grid.origin[1]) / res).astype(np.int64)
    flat = np.unique(ix * grid.shape[1] + iy)

    hx = np.floor((pts[:, 0] - grid.origin[0]) / res).astype(np.int64)
    hy = np.floor((pts[:, 1] - grid.origin[1]) / res).astype(np.int64)
    hit_flat = np.unique(hx * grid.shape[1] + hy)

    free_flat = np.setdiff1d(flat, hit_flat, assume_unique=True)
    now = scan.timestamp
    cells = grid.cells.reshape(-1)
    stamps = grid.obstacle_stamp.reshape(-1)
    allowed = now - stamps[free_flat] > sticky_window
    cells[free_flat[allowed]] = FREE
    cells[hit_flat] = OBSTACLE
    stamps[hit_flat] = now
    return grid


def dist2(pose: Pose, other: Pose) -> float:
    return (pose.x - other.x) ** 2 + (pose.y - other.y) ** 2


class Mapper:
    """Accumulates scans; publishes immutable snapshots with the true pose."""

    def __init__(self, resolution: float = 0.05, sticky_window: float = 1.0,
                 drift: tuple[float, float] = (0.0, 0.0)):
        self.grid = OccupancyGrid(resolution=resolution)
        self.sticky_window = sticky_window
        self.drift = drift  # hook for robustness experiments; zero by default
        self.last_pose: Pose | None = None
        self.last_time: float | None = None

    def integrate(self, pose: Pose, scan: Scan) -> None:
        if self.drift != (0.0, 0.0):
            pose = Pose(pose.x + self.drift[0], pose.y + self.drift[1],
                        pose.heading)
            scan = Scan(points=tuple((x + self.drift[0], y + self.drift[1])
                                     for (x, y) in scan.points),
                        origin=pose, timestamp=scan.timestamp)
        self.grid = integrate_scan_fast(self.grid, pose, scan,
                                        self.sticky_window)
        self.last_pose = pose
        self.last_time = scan.timestamp

    def snapshot(self) -> MapSnapshot:
        if self.last_pose is None:
            raise RuntimeError("no data yet")
        frozen = self.grid.copy()
        frozen.cells.setflags(write=False)
        return MapSnapshot(grid=frozen, pose=self.last_pose,
                           timestamp=self.last_time)


def export_pgm(grid: OccupancyGrid, path, metadata_path=None) -> None:
    """Write the grid as a portable greymap plus a JSON sidecar."""
    import json
    from pathlib import Path

    shade = np.full(grid.shape, 127, dtype=np.uint8)
    shade[grid.cells == FREE] = 255
    shade[grid.cells == OBSTACLE] = 0
    rows = shade.T[::-1]  # image row 0 at max y
    header = f"P5\n{rows.shape[1]} {rows.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + rows.tobytes())
    if metadata_path is not None:
        meta = {"origin": list(grid.origin), "resolution": grid.resolution,
                "width": rows.shape[1], "height": rows.shape[0]}
        Path(metadata_path).write_text(json.dumps(meta, indent=2),
                                       encoding="utf-8")
