from .walls import Wall, douglas_peucker, extract_walls, flatten_rotate
from .projection import WallRegion, project_wall_region
from .proposals import DoorDetection, DoorProposal, detect_doors, propose_doors, score_proposal
from .clustering import DoorCluster, cluster_detections, hierarchical_clusters
from .search import door_driving_goals, normalize_tag, parse_tag, plan_door_search

__all__ = [
    "DoorCluster",
    "DoorDetection",
    "DoorProposal",
    "Wall",
    "WallRegion",
    "cluster_detections",
    "detect_doors",
    "door_driving_goals",
    "douglas_peucker",
    "extract_walls",
    "flatten_rotate",
    "hierarchical_clusters",
    "normalize_tag",
    "parse_tag",
    "plan_door_search",
    "project_wall_region",
    "propose_doors",
    "score_proposal",
]
