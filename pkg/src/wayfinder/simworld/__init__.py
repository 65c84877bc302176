from .floorplan import (
    Door,
    FloorPlan,
    FloorplanError,
    PersonScript,
    Pose,
    fixture_path,
    list_fixtures,
    load_fixture,
    load_floorplan,
    load_floorplan_file,
)
from .world import (
    CameraModel,
    ImageSegment,
    MotionResult,
    Scan,
    World,
)

__all__ = [
    "Door",
    "FloorPlan",
    "FloorplanError",
    "PersonScript",
    "Pose",
    "CameraModel",
    "ImageSegment",
    "MotionResult",
    "Scan",
    "World",
    "fixture_path",
    "list_fixtures",
    "load_fixture",
    "load_floorplan",
    "load_floorplan_file",
]
