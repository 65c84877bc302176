import pytest

from wayfinder.dialogue import (
    UNFILLED as U,
    apply_rewrite_rules,
    find_rule_match,
    validate_plan,
)
from wayfinder.dialogue.rewrite import RULES, RewriteDivergence


def test_forward_left_gains_stop_condition():
    # The canonical illustration: a turn needs an intersection to turn at.
    out = apply_rewrite_rules(["forward", "left"])
    assert out[:3] == ["forward", U, "left"]


def test_lone_goal_gets_leading_unfilled():
    assert apply_rewrite_rules(["goal-F"]) == [U, "goal-F"]


def test_forward_forward_collapses_and_elbow_takes_either():
    out = apply_rewrite_rules(["forward", "forward", "elbow", U])
    assert out[:3] == ["forward", "elbow", "either"]
    # A trailing direction still needs a stop condition, so the fixpoint
    # keeps one unfilled step at the end.
    assert out == ["forward", "elbow", "either", U]


def test_leading_int_gets_unfilled_then_forward_for_vague_ints():
    assert apply_rewrite_rules(["int-R", "right"]) == \
        ["forward", "int-R", "right", U]
    # Typed intersections keep the unfilled step (the direction is unknown).
    out = apply_rewrite_rules(["three-way", "right"])
    assert out[0] == U
    assert out[1] == "three-way"


def test_int_before_turn_around_dropped():
    assert apply_rewrite_rules(["end", "turn-around", "forward",
                                "end", "goal-F"])[0] == "turn-around"


def test_turn_around_then_int_gains_forward():
    out = apply_rewrite_rules(["turn-around", "end", "left", "goal-F"])
    assert out == ["turn-around", "forward", "end", "left", "goal-F"]


def test_goal_not_last_deleted():
    out = apply_rewrite_rules(["forward", "goal-F", "end", "left", "goal-L"])
    assert "goal-F" not in out
    assert out[-1] == "goal-L"


def test_final_goal_survives():
    plan = ["turn-around", "forward", "end", "left", "end", "right", "goal-L"]
    assert apply_rewrite_rules(plan) == plan


def test_typed_int_absorbs_vague_int():
    out = apply_rewrite_rules(["forward", "three-way", "int-R", "right",
                               "goal-F"])
    assert out == ["forward", "three-way", "right", "goal-F"]


def test_turn_then_forward_drops_forward():
    out = apply_rewrite_rules(["forward", "int-R", "right", "forward",
                               "int-L", "left", "goal-L"])
    assert out == ["forward", "int-R", "right", "int-L", "left", "goal-L"]


def test_elbow_forward_dropped():
    # Driving straight at an elbow is impossible: the forward is dropped and
    # the resulting gap is filled with "either" by the elbow rule.
    out = apply_rewrite_rules(["forward", "elbow", "forward", "elbow",
                               "right", "goal-F"])
    assert out == ["forward", "elbow", "either", "elbow", "right", "goal-F"]


def test_fixpoint_has_no_matching_rule():
    plans = [
        ["forward", "left"],
        ["goal-F"],
        ["int-R", "right"],
        ["turn-around", "right", "left", "goal-L"],
        ["three-way", "three-way", "goal-F"],
        ["forward", "forward", "forward", "elbow", U],
    ]
    for plan in plans:
        out = apply_rewrite_rules(plan)
        assert find_rule_match(out) is None, (plan, out)


def test_structure_holds_at_fixpoint_modulo_unfilled():
    from wayfinder.dialogue.validate import structure_violations
    plans = [
        ["forward", "left"],
        ["turn-around", "end", "left"],
        ["goal-L"],
        ["right", "right", "right", "goal-F"],
        ["elbow", "left", "goal-F"],
    ]
    for plan in plans:
        out = apply_rewrite_rules(plan)
        assert structure_violations(out) == [], (plan, out)


def test_divergence_guard_raises():
    # No reachable plan diverges; force the guard with a hostile rule table.
    import wayfinder.dialogue.rewrite as rw
    bad = ("oscillate", lambda p: (0, 1, ["left"]) if p[0] == "right"
           else (0, 1, ["right"]))
    original = rw.RULES
    rw.RULES = [bad]
    try:
        with pytest.raises(RewriteDivergence):
            rw.apply_rewrite_rules(["right", "goal-F"])
    finally:
        rw.RULES = original


def test_rule_table_size_matches_published_set():
    assert len(RULES) == 25
