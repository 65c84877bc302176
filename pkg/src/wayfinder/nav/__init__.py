from .assignment import hungarian_assign
from .trajectories import ClearanceField, Trajectory, TrajectorySets, generate_trajectories
from .intersections import DetectedIntersection, detect_intersection, refine_intersection
from .graph import Hallway, QualitativeMap, RegisteredIntersection
from .goals import ForwardContext, forward_driving_goal, lateral_recovery_goal
from .loop import NavLoop

__all__ = [
    "ClearanceField",
    "DetectedIntersection",
    "ForwardContext",
    "Hallway",
    "NavLoop",
    "QualitativeMap",
    "RegisteredIntersection",
    "Trajectory",
    "TrajectorySets",
    "detect_intersection",
    "forward_driving_goal",
    "generate_trajectories",
    "hungarian_assign",
    "lateral_recovery_goal",
    "refine_intersection",
]
