"""Wall regions: image bands between a wall's floor and lintel projections.

A wall projects into the image at ground level and at the standard door-top
height; the band between them is where door posts and tops are searched.
The top boundary carries a vertical tolerance, converted to pixels at the
wall's depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..config import SimConfig
from .walls import Wall

_NEAR_PLANE = 0.1


@dataclass(frozen=True)
class WallRegion:
    top: tuple[float, float, float, float]      # u1, v1, u2, v2 at band height
    bottom: tuple[float, float, float, float]   # u1, v1, u2, v2 at the floor
    tolerance_px: tuple[float, float]           # vertical slack per endpoint
    wall: Wall
    world_span: tuple[tuple[float, float], tuple[float, float]]

    @property
    def u_range(self) -> tuple[float, float]:
        us = (self.top[0], self.top[2])
        return (min(us), max(us))

    def boundary_v(self, u: float, which: str) -> float:
        """Interpolate the top/bottom boundary v at image column u."""
        u1, v1, u2, v2 = self.top if which == "top" else self.bottom
        if abs(u2 - u1) < 1e-9:
            return (v1 + v2) / 2.0
        t = (u - u1) / (u2 - u1)
        return v1 + t * (v2 - v1)

    def tolerance_at(self, u: float) -> float:
        lo, hi = self.u_range
        if hi - lo < 1e-9:
            return max(self.tolerance_px)
        t = (u - lo) / (hi - lo)
        a, b = self.tolerance_px
        return a + t * (b - a)


def _clip_to_front(p1: np.ndarray, p2: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray] | None:
    """Clip a camera-frame segment to the near plane (z forward)."""
    z1, z2 = p1[2], p2[2]
    if z1 <= _NEAR_PLANE and z2 <= _NEAR_PLANE:
        return None
    if z1 > _NEAR_PLANE and z2 > _NEAR_PLANE:
        return p1, p2
    t = (_NEAR_PLANE - z1) / (z2 - z1)
    cut = p1 + t * (p2 - p1)
    return (cut, p2) if z1 <= _NEAR_PLANE else (p1, cut)


def project_wall_region(wall: Wall, pose, camera,
                        config: SimConfig | None = None) -> WallRegion | None:
    """Project a wall at the floor and the door-top band into the image."""
    config = config or SimConfig()
    R, t = camera.extrinsics(pose)
    band = config.wall_band_height
    (x1, y1), (x2, y2) = wall.endpoints

    cam_pts = {}
    for h, name in ((0.0, "bottom"), (band, "top")):
        a = R @ np.array([x1, y1, h]) + t
        b = R @ np.array([x2, y2, h]) + t
        clipped = _clip_to_front(a, b)
        if clipped is None:
            return None
        cam_pts[name] = clipped

    def image_of(p):
        u = camera.f * p[0] / p[2] + camera.cx
        v = camera.f * p[1] / p[2] + camera.cy
        return u, v, p[2]

    top_a = image_of(cam_pts["top"][0])
    top_b = image_of(cam_pts["top"][1])
    bot_a = image_of(cam_pts["bottom"][0])
    bot_b = image_of(cam_pts["bottom"][1])

    us = [top_a[0], top_b[0], bot_a[0], bot_b[0]]
    if max(us) < 0 or min(us) > camera.width:
        return None

    tol_a = config.top_tolerance * camera.f / top_a[2]
    tol_b = config.top_tolerance * camera.f / top_b[2]
    return WallRegion(
        top=(top_a[0], top_a[1], top_b[0], top_b[1]),
        bottom=(bot_a[0], bot_a[1], bot_b[0], bot_b[1]),
        tolerance_px=(tol_a, tol_b),
        wall=wall,
        world_span=((x1, y1), (x2, y2)),
    )
