"""Floor-plan documents: schema, validation, and the bundled fixture library.

Format (JSON, ``format: 1``)::

    {
      "format": 1,
      "bounds": [x0, y0, x1, y1],
      "hallway_width": 2.5,
      "walls": [[x1, y1, x2, y2], ...],
      "doors": [{"posts": [[x, y], [x, y]], "tag": "331", "side": "left"}],
      "persons": [{"position": [x, y],
                   "waypoints": [[x, y, speed], ...],
                   "responses": {...} | "interactive"}],
      "annotations": {...}   # optional ground truth for tests/harness
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..geometry import norm_angle, point_segment_distance

DOOR_POST_WALL_TOL = 0.05
MIN_HALLWAY_WIDTH = 1.2


class FloorplanError(ValueError):
    """Raised for malformed or invariant-violating floor-plan documents."""


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)
                and math.isfinite(self.heading)):
            raise ValueError("pose components must be finite")
        object.__setattr__(self, "heading", norm_angle(self.heading))

    @property
    def point(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass
class PersonScript:
    position: tuple[float, float]
    waypoints: list[tuple[float, float, float]] = field(default_factory=list)
    responses: dict[str, str] | str = field(default_factory=dict)

    def validate(self, index: int) -> None:
        for wp in self.waypoints:
            if len(wp) != 3:
                raise FloorplanError(
                    f"persons[{index}]: waypoint must be [x, y, speed]")
            if wp[2] < 0:
                raise FloorplanError(f"persons[{index}]: speed must be >= 0")


@dataclass
class Door:
    post_a: tuple[float, float]
    post_b: tuple[float, float]
    tag: str
    side: str = ""

    @property
    def center(self) -> tuple[float, float]:
        return ((self.post_a[0] + self.post_b[0]) / 2.0,
                (self.post_a[1] + self.post_b[1]) / 2.0)

    @property
    def width(self) -> float:
        return math.hypot(self.post_b[0] - self.post_a[0],
                          self.post_b[1] - self.post_a[1])


@dataclass
class FloorPlan:
    bounds: tuple[float, float, float, float]
    hallway_width: float
    walls: list[tuple[float, float, float, float]]
    doors: list[Door] = field(default_factory=list)
    persons: list[PersonScript] = field(default_factory=list)
    annotations: dict = field(default_factory=dict)

    def contains(self, p: tuple[float, float]) -> bool:
        x0, y0, x1, y1 = self.bounds
        return x0 <= p[0] <= x1 and y0 <= p[1] <= y1


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise FloorplanError(message)


def load_floorplan(document: str) -> FloorPlan:
    """Parse and validate a floor-plan document; deterministic in its bytes."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FloorplanError(f"parse error at line {exc.lineno}: {exc.msg}") from exc

    _require(isinstance(data, dict), "document must be a JSON object")
    _require(data.get("format") == 1, "field 'format' must be 1")
    for key in ("bounds", "walls", "hallway_width"):
        _require(key in data, f"missing field '{key}'")

    bounds = tuple(float(v) for v in data["bounds"])
    _require(len(bounds) == 4, "field 'bounds' must be [x0, y0, x1, y1]")
    _require(bounds[0] < bounds[2] and bounds[1] < bounds[3],
             "field 'bounds' must describe a non-empty rectangle")

    hallway_width = float(data["hallway_width"])
    _require(hallway_width > MIN_HALLWAY_WIDTH,
             f"hallway_width must exceed {MIN_HALLWAY_WIDTH} m")

    walls: list[tuple[float, float, float, float]] = []
    for i, seg in enumerate(data["walls"]):
        _require(len(seg) == 4, f"walls[{i}] must be [x1, y1, x2, y2]")
        seg = tuple(float(v) for v in seg)
        _require(math.hypot(seg[2] - seg[0], seg[3] - seg[1]) > 1e-9,
                 f"walls[{i}] has zero length")
        walls.append(seg)

    doors: list[Door] = []
    for i, d in enumerate(data.get("doors", [])):
        _require("posts" in d and len(d["posts"]) == 2,
                 f"doors[{i}] must have two posts")
        post_a = tuple(float(v) for v in d["posts"][0])
        post_b = tuple(float(v) for v in d["posts"][1])
        tag = str(d.get("tag", ""))
        _require(bool(tag), f"doors[{i}]: tag text must be non-empty")
        for label, post in (("A", post_a), ("B", post_b)):
            best = min((point_segment_distance(post, (w[0], w[1]), (w[2], w[3]))
                        for w in walls), default=math.inf)
            _require(best <= DOOR_POST_WALL_TOL,
                     f"doors[{i}]: post {label} not on a wall "
                     f"(nearest wall {best:.3f} m away)")
        doors.append(Door(post_a, post_b, tag, str(d.get("side", ""))))

    persons: list[PersonScript] = []
    for i, p in enumerate(data.get("persons", [])):
        _require("position" in p, f"persons[{i}] missing position")
        script = PersonScript(
            position=tuple(float(v) for v in p["position"]),
            waypoints=[tuple(float(v) for v in wp)
                       for wp in p.get("waypoints", [])],
            responses=p.get("responses", {}),
        )
        script.validate(i)
        persons.append(script)

    return FloorPlan(
        bounds=bounds,
        hallway_width=hallway_width,
        walls=walls,
        doors=doors,
        persons=persons,
        annotations=data.get("annotations", {}),
    )


def load_floorplan_file(path: str | Path) -> FloorPlan:
    return load_floorplan(Path(path).read_text(encoding="utf-8"))


def _fixture_root():
    return resources.files("wayfinder") / "fixtures"


def list_fixtures() -> list[str]:
    root = _fixture_root()
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def fixture_path(name: str) -> Path:
    path = _fixture_root() / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no fixture named {name!r}")
    return Path(str(path))


def load_fixture(name: str) -> FloorPlan:
    return load_floorplan(fixture_path(name).read_text(encoding="utf-8"))
