"""Plan rewrite rules: pattern-directed edits that render plans coherent.

Rules are scanned in a fixed order; the first rule that matches anywhere is
applied at its leftmost match and the scan restarts, until no rule matches.
A guard aborts after 100 applications.

A goal action is deleted only when it is not the final step; an unfilled
step is appended after a trailing direction or intersection so that the
conversation can keep asking about the missing stop condition or goal.
"""

from __future__ import annotations

from .actions import UNFILLED, is_dir, is_goal, is_int, is_ntadir

MAX_REWRITES = 100


class RewriteDivergence(RuntimeError):
    """The rewrite system failed to reach a fixpoint within the guard."""


def _find_pair(plan, first_ok, second_ok):
    for i in range(len(plan) - 1):
        if first_ok(plan[i]) and second_ok(plan[i + 1]):
            return i
    return None


def _is(value):
    return lambda a: a == value


# Each entry: (name, matcher(plan) -> edit | None) where an edit is
# (start, length, replacement_list).

def _r_lone_goal(p):
    if len(p) == 1 and is_goal(p[0]):
        return (0, 1, [UNFILLED, p[0]])
    return None


def _r_goal_then_unfilled_at_end(p):
    if len(p) >= 2 and is_goal(p[-2]) and p[-1] == UNFILLED:
        return (len(p) - 1, 1, [])
    return None


def _r_start_unfilled_intl(p):
    if len(p) >= 3 and p[0] == UNFILLED and p[1] == "int-L" and is_dir(p[2]):
        return (0, 1, ["forward"])
    return None


def _r_start_unfilled_intr(p):
    if len(p) >= 3 and p[0] == UNFILLED and p[1] == "int-R" and is_dir(p[2]):
        return (0, 1, ["forward"])
    return None


def _r_start_int_turnaround(p):
    if len(p) >= 2 and is_int(p[0]) and p[1] == "turn-around":
        return (0, 1, [])
    return None


def _r_start_turnaround_int(p):
    if len(p) >= 2 and p[0] == "turn-around" and is_int(p[1]):
        return (1, 0, ["forward"])
    return None


def _r_start_int(p):
    if p and is_int(p[0]):
        return (0, 0, [UNFILLED])
    return None


def _r_forward_forward(p):
    i = _find_pair(p, _is("forward"), _is("forward"))
    return (i, 1, []) if i is not None else None


def _r_goal_not_last(p):
    for i in range(len(p) - 1):
        if is_goal(p[i]):
            return (i, 1, [])
    return None


def _typed_int_absorbs(int_name, vague):
    def matcher(p):
        i = _find_pair(p, _is(int_name), _is(vague))
        return (i + 1, 1, []) if i is not None else None
    return matcher


def _r_ntadir_forward(p):
    i = _find_pair(p, is_ntadir, _is("forward"))
    return (i + 1, 1, []) if i is not None else None


def _r_ntadir_dir(p):
    i = _find_pair(p, is_ntadir, is_dir)
    return (i + 1, 0, [UNFILLED]) if i is not None else None


def _r_int_int(p):
    i = _find_pair(p, is_int, is_int)
    return (i + 1, 0, [UNFILLED]) if i is not None else None


def _r_int_goal(p):
    i = _find_pair(p, is_int, is_goal)
    return (i + 1, 0, [UNFILLED]) if i is not None else None


def _r_trailing_dir(p):
    if p and is_dir(p[-1]):
        return (len(p), 0, [UNFILLED])
    return None


def _r_trailing_int(p):
    if p and is_int(p[-1]):
        return (len(p), 0, [UNFILLED])
    return None


def _r_elbow_forward(p):
    i = _find_pair(p, _is("elbow"), _is("forward"))
    return (i + 1, 1, []) if i is not None else None


def _r_elbow_unfilled(p):
    i = _find_pair(p, _is("elbow"), _is(UNFILLED))
    return (i + 1, 1, ["either"]) if i is not None else None


def _r_start_unfilled_forward(p):
    if len(p) >= 2 and p[0] == UNFILLED and p[1] == "forward":
        return (0, 1, [])
    return None


def _r_start_unfilled_turnaround(p):
    if len(p) >= 2 and p[0] == UNFILLED and p[1] == "turn-around":
        return (0, 1, [])
    return None


RULES = [
    ("lone-goal", _r_lone_goal),
    ("drop-unfilled-after-goal", _r_goal_then_unfilled_at_end),
    ("fill-start-before-int-L", _r_start_unfilled_intl),
    ("fill-start-before-int-R", _r_start_unfilled_intr),
    ("drop-int-before-turn-around", _r_start_int_turnaround),
    ("forward-after-turn-around", _r_start_turnaround_int),
    ("unfilled-before-leading-int", _r_start_int),
    ("collapse-forward-forward", _r_forward_forward),
    ("drop-goal-not-last", _r_goal_not_last),
    ("elbow-absorbs-int-L", _typed_int_absorbs("elbow", "int-L")),
    ("elbow-absorbs-int-R", _typed_int_absorbs("elbow", "int-R")),
    ("three-way-absorbs-int-L", _typed_int_absorbs("three-way", "int-L")),
    ("three-way-absorbs-int-R", _typed_int_absorbs("three-way", "int-R")),
    ("four-way-absorbs-int-L", _typed_int_absorbs("four-way", "int-L")),
    ("four-way-absorbs-int-R", _typed_int_absorbs("four-way", "int-R")),
    ("drop-forward-after-turn", _r_ntadir_forward),
    ("unfilled-between-dirs", _r_ntadir_dir),
    ("unfilled-between-ints", _r_int_int),
    ("unfilled-before-goal", _r_int_goal),
    ("unfilled-after-trailing-dir", _r_trailing_dir),
    ("unfilled-after-trailing-int", _r_trailing_int),
    ("no-forward-at-elbow", _r_elbow_forward),
    ("either-at-elbow", _r_elbow_unfilled),
    ("drop-unfilled-before-forward", _r_start_unfilled_forward),
    ("drop-unfilled-before-turn-around", _r_start_unfilled_turnaround),
]


def find_rule_match(plan: list[str]) -> tuple[str, tuple[int, int, list[str]]] | None:
    """First rule (in table order) matching the plan, with its leftmost edit."""
    for name, matcher in RULES:
        edit = matcher(plan)
        if edit is not None:
            return name, edit
    return None


def apply_rewrite_rules(plan: list[str]) -> list[str]:
    """Iterate the rule table to a fixpoint (or raise RewriteDivergence)."""
    current = list(plan)
    for _ in range(MAX_REWRITES):
        found = find_rule_match(current)
        if found is None:
            return current
        _, (start, length, replacement) = found
        current[start:start + length] = replacement
    raise RewriteDivergence("rewrite divergence")
