"""Query generation for the first unfilled plan step.

Patterns are tried in table order; the first match wins. Single queries ask
for one piece of information (a direction); open-ended queries hand the
floor back to the person.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import UNFILLED, is_dir, is_goal, is_int

ORDINALS = ("zeroth", "first", "second", "third", "fourth", "fifth", "sixth",
            "seventh", "eighth", "ninth", "tenth", "eleventh", "twelfth")

INT_PHRASES = {
    "elbow": "elbow",
    "three-way": "three-way",
    "four-way": "four-way",
    "end": "end of the hall",
    "int-L": "intersection with a left",
    "int-R": "intersection with a right",
    "int-F": "intersection ahead",
}

DIR_PHRASES = {
    "forward": "forward",
    "left": "left",
    "right": "right",
    "turn-around": "around",
    "either": "either way",
}


@dataclass(frozen=True)
class Query:
    pattern: str
    query_type: str  # "single" or "open-ended"
    text: str


def _ordinal(n: int) -> str:
    return ORDINALS[n] if n < len(ORDINALS) else f"{n}th"


def _nth_dir(plan: list[str], index: int) -> str:
    """Ordinal of the direction at index among same-valued prior directions."""
    value = plan[index]
    count = sum(1 for a in plan[:index] if a == value)
    return _ordinal(count + 1)


def _jth_int(plan: list[str], index: int) -> str:
    value = plan[index]
    count = sum(1 for a in plan[:index] if a == value)
    return _ordinal(count + 1)


def generate_query(plan: list[str], destination: str) -> Query:
    """First matching template for the first unfilled step.

    The plan must contain an unfilled step; pattern coverage over all plans
    the pipeline can produce is asserted (a miss is a defect).
    """
    if UNFILLED not in plan:
        raise ValueError("plan has no unfilled step")
    i = plan.index(UNFILLED)
    before = plan[i - 1] if i > 0 else None
    before2 = plan[i - 2] if i > 1 else None
    after = plan[i + 1] if i + 1 < len(plan) else None

    # [unfilled] alone
    if len(plan) == 1:
        return Query("lone", "open-ended",
                     f"Could you tell me how to navigate to {destination}?")
    # unfilled first, intersection next
    if i == 0 and after is not None and is_int(after):
        return Query("start-int", "single",
                     "Which direction do I start out going?")
    # unfilled first, goal next
    if i == 0 and after is not None and is_goal(after):
        return Query("start-goal", "single",
                     "Which direction do I start out going?")
    # turn-around then unfilled
    if before == "turn-around":
        return Query("after-turn-around", "open-ended",
                     "What do I do after turning around?")
    # plan-initial direction then unfilled
    if i == 1 and before is not None and is_dir(before):
        return Query("after-start-dir", "open-ended",
                     f"What do I do after starting to go "
                     f"{DIR_PHRASES[before]}?")
    # turn-around, direction, unfilled
    if before2 == "turn-around" and before is not None and is_dir(before):
        return Query("after-turn-around-dir", "open-ended",
                     f"What do I do after turning around and going "
                     f"{DIR_PHRASES[before]}?")
    # left before unfilled (with or without an earlier left)
    if before == "left":
        prior = sum(1 for a in plan[:i - 1] if a == "left")
        if prior:
            return Query("after-nth-left", "open-ended",
                         f"What do I do after I turn left (this being the "
                         f"{_nth_dir(plan, i - 1)} left I take)?")
        return Query("after-left", "open-ended",
                     "What do I do after I turn left?")
    if before == "right":
        prior = sum(1 for a in plan[:i - 1] if a == "right")
        if prior:
            return Query("after-nth-right", "open-ended",
                         f"What do I do after I turn right (this being the "
                         f"{_nth_dir(plan, i - 1)} right I take)?")
        return Query("after-right", "open-ended",
                     "What do I do after I turn right?")
    # elbow, direction, unfilled
    if before2 == "elbow" and before is not None and is_dir(before):
        return Query("after-elbow-dir", "open-ended",
                     f"Where do I go after the elbow (this being the "
                     f"{_jth_int(plan, i - 2)} elbow)?")
    # intersection, forward, unfilled
    if before == "forward" and before2 is not None and is_int(before2):
        return Query("after-through-int", "open-ended",
                     f"What do I do after going through the "
                     f"{_jth_int(plan, i - 2)} {INT_PHRASES[before2]}?")
    # intersection then unfilled, at plan end or before the goal
    if before is not None and is_int(before) and (
            after is None or is_goal(after)):
        return Query("after-int", "open-ended",
                     f"What do I do after getting to the "
                     f"{_jth_int(plan, i - 1)} {INT_PHRASES[before]}?")
    # intersection, unfilled, intersection
    if before is not None and is_int(before) and after is not None \
            and is_int(after):
        return Query("between-ints", "single",
                     f"When I am at the {INT_PHRASES[before]}, which "
                     f"direction will I go to get to the "
                     f"{INT_PHRASES[after]}?")
    raise AssertionError(f"no query template matches plan {plan!r}")
