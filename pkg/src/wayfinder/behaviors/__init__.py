from .tracking import PersonTrack, Tracker, classify_track
from .follow import FollowDirections, match_intersection, preprocess_plan
from .wander import Wander
from .approach import ApproachPerson
from .door_nav import NavigateDoor
from .fsm import Brain, BrainInputs

__all__ = [
    "ApproachPerson",
    "Brain",
    "NavigateDoor",
    "BrainInputs",
    "FollowDirections",
    "PersonTrack",
    "Tracker",
    "Wander",
    "classify_track",
    "match_intersection",
    "preprocess_plan",
]
