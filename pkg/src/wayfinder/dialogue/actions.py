"""Plan actions and step kinds.

A plan is a list of action strings, possibly containing the unfilled marker.
Direction actions say how to drive, intersection actions say where to stop,
and a goal action ends the plan.
"""

from __future__ import annotations

UNFILLED = "□"  # the empty-step marker

DIR_ACTIONS = ("forward", "left", "right", "turn-around", "either")
INT_ACTIONS = ("elbow", "three-way", "four-way", "int-L", "int-R", "int-F", "end")
GOAL_ACTIONS = ("goal-F", "goal-L", "goal-R", "person")
EXEC_ACTIONS = ("forward-through-int",)  # inserted for execution only

MAX_PLAN_STEPS = 10

_KIND = {}
for _a in DIR_ACTIONS:
    _KIND[_a] = "dir"
for _a in INT_ACTIONS:
    _KIND[_a] = "int"
for _a in GOAL_ACTIONS:
    _KIND[_a] = "goal"
for _a in EXEC_ACTIONS:
    _KIND[_a] = "exec"
_KIND[UNFILLED] = "unfilled"


def kind_of(action: str) -> str:
    try:
        return _KIND[action]
    except KeyError:
        raise ValueError(f"unknown action: {action!r}") from None


def is_dir(action: str) -> bool:
    return _KIND.get(action) == "dir"


def is_int(action: str) -> bool:
    return _KIND.get(action) == "int"


def is_goal(action: str) -> bool:
    return _KIND.get(action) == "goal"


def is_ntadir(action: str) -> bool:
    """Any direction action except turn-around."""
    return is_dir(action) and action != "turn-around"
