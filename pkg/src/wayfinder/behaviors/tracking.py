"""Detection-based person tracking on map coordinates.

Detections pair with tracks by minimum-cost assignment on Euclidean distance
from each track's (forward-projected) last position. Pairings implying an
implausible walking speed break into new tracks. Tracks missing detections
are projected forward briefly, then pruned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..config import SimConfig
from ..geometry import dist
from ..nav.assignment import hungarian_assign

UNDETERMINED = "undetermined"
STATIONARY = "stationary"
APPROACHING = "approaching"
WALKING_AWAY = "walking-away"


@dataclass
class PersonTrack:
    id: int
    history: list[tuple[tuple[float, float], float, float]] = \
        field(default_factory=list)  # (point, timestamp, robot distance)
    last_update: float = 0.0

    @property
    def position(self) -> tuple[float, float]:
        return self.history[-1][0]

    @property
    def age(self) -> float:
        return self.history[-1][1] - self.history[0][1]

    def velocity(self) -> tuple[float, float]:
        if len(self.history) < 2:
            return (0.0, 0.0)
        (p1, t1, _), (p2, t2, _) = self.history[-2], self.history[-1]
        dt = t2 - t1
        if dt <= 0:
            return (0.0, 0.0)
        return ((p2[0] - p1[0]) / dt, (p2[1] - p1[1]) / dt)

    def projected(self, now: float) -> tuple[float, float]:
        vx, vy = self.velocity()
        dt = now - self.history[-1][1]
        return (self.position[0] + vx * dt, self.position[1] + vy * dt)


def classify_track(track: PersonTrack, now: float,
                   config: SimConfig | None = None) -> str:
    """Stationary / approaching / walking-away by the radial rate over the
    classification window; young tracks are undetermined."""
    config = config or SimConfig()
    if track.age < config.track_classify_age:
        return UNDETERMINED
    window_start = now - config.track_classify_age
    past = min(track.history, key=lambda h: abs(h[1] - window_start))
    recent = track.history[-1]
    span = recent[1] - past[1]
    if span <= 0:
        return STATIONARY
    rate = (past[2] - recent[2]) / span  # positive when closing in
    if rate > config.track_radial_rate:
        return APPROACHING
    if rate < -config.track_radial_rate:
        return WALKING_AWAY
    return STATIONARY


class Tracker:
    def __init__(self, config: SimConfig | None = None):
        self.config = config or SimConfig()
        self.tracks: list[PersonTrack] = []
        self._next_id = 0

    def update(self, detections: list[tuple[tuple[float, float], float]],
               robot_point: tuple[float, float], now: float) -> None:
        cfg = self.config
        points = [p for (p, _) in detections]
        pairs = []
        if self.tracks and points:
            cost = [[dist(track.projected(now), p) for p in points]
                    for track in self.tracks]
            pairs = hungarian_assign(cost)
        matched_tracks = set()
        matched_points = set()
        for (ti, pi) in pairs:
            track = self.tracks[ti]
            gap = now - track.history[-1][1]
            moved = dist(track.position, points[pi])
            if gap > 0 and moved / gap > cfg.track_speed_break:
                continue  # implausible: detection becomes a new track
            matched_tracks.add(ti)
            matched_points.add(pi)
            track.history.append((points[pi], now, dist(robot_point,
                                                        points[pi])))
            track.last_update = now
        for pi, p in enumerate(points):
            if pi in matched_points:
                continue
            track = PersonTrack(self._next_id)
            self._next_id += 1
            track.history.append((p, now, dist(robot_point, p)))
            track.last_update = now
            self.tracks.append(track)
        self.tracks = [t for t in self.tracks
                       if now - t.last_update <= cfg.track_prune_age]

    def classified(self, now: float) -> list[tuple[PersonTrack, str]]:
        return [(t, classify_track(t, now, self.config)) for t in self.tracks]

    def approachable(self, now: float) -> list[PersonTrack]:
        return [t for (t, c) in self.classified(now)
                if c in (STATIONARY, APPROACHING)]
