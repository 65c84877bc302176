"""Plan structure validation.

The five structure rules: the plan starts with a direction, ends with a
goal, a direction (other than one following turn-around) follows an
intersection, intersections are never adjacent, and directions are never
adjacent unless the first is turn-around. Goals may only be final.
Unfilled steps are wildcards for the structural checks.
"""

from __future__ import annotations

from .actions import UNFILLED, is_dir, is_goal, is_int

COMPLETE = "complete-consistent"
INCOMPLETE = "incomplete"
INCONSISTENT = "inconsistent"


def structure_violations(plan: list[str]) -> list[str]:
    """Structure-rule violations, treating unfilled steps as wildcards."""
    problems = []
    if not plan:
        return problems
    first = plan[0]
    if first != UNFILLED and not is_dir(first):
        problems.append("first step must be a direction")
    last = plan[-1]
    if last != UNFILLED and not is_goal(last):
        problems.append("last step must be a goal")
    for i, a in enumerate(plan[:-1]):
        if is_goal(a):
            problems.append(f"goal at step {i} is not final")
    for i in range(1, len(plan)):
        a, b = plan[i - 1], plan[i]
        if a == UNFILLED or b == UNFILLED:
            continue
        if is_int(a) and is_int(b):
            problems.append(f"adjacent intersections at step {i}")
        if is_dir(b) and not (is_int(a) or a == "turn-around"):
            problems.append(f"direction at step {i} does not follow an "
                            "intersection")
    return problems


def validate_plan(plan: list[str]) -> str:
    if not plan:
        return INCOMPLETE
    if structure_violations(plan):
        return INCONSISTENT
    if UNFILLED in plan:
        return INCOMPLETE
    return COMPLETE
