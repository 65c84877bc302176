import numpy as np
import pytest

from wayfinder.dialogue import (
    UNFILLED as U,
    ConversationState,
    conversation_step,
    generate_query,
    merge_response,
    start_conversation,
    validate_plan,
)
from wayfinder.dialogue.conversation import NOT_HEARD, NOT_UNDERSTOOD, THANKS
from wayfinder.dialogue.validate import COMPLETE, INCOMPLETE, INCONSISTENT


def say(state, text):
    return conversation_step(state, {"kind": "utterance", "text": text})


def test_initial_query_names_destination():
    state, out = start_conversation("345")
    assert out.say == "Could you tell me how to navigate to 345?"
    assert state.plan == [U]


def test_validate_published_plan_families():
    assert validate_plan(["turn-around", "forward", "end", "left", "end",
                          "right", "goal-L"]) == COMPLETE
    assert validate_plan(["forward", U, "left", "goal-F"]) == INCOMPLETE
    assert validate_plan(["elbow", "left", "goal-F"]) == INCONSISTENT
    assert validate_plan(["forward", "left", "goal-F"]) == INCONSISTENT
    assert validate_plan(["forward", "end", "end", "goal-F"]) == INCONSISTENT
    assert validate_plan(["forward", "goal-F", "goal-F"]) == INCONSISTENT
    assert validate_plan(["turn-around", "forward", "end", "left",
                          "goal-L"]) == COMPLETE


def test_query_templates_for_plan_shapes():
    q = generate_query([U], "12")
    assert q.query_type == "open-ended"
    q = generate_query([U, "int-R", "right", "goal-F"], "12")
    assert q.query_type == "single"
    assert q.text == "Which direction do I start out going?"
    q = generate_query([U, "goal-F"], "12")
    assert q.query_type == "single"
    q = generate_query(["forward", "end", "left", U], "12")
    assert q.text == "What do I do after I turn left?"
    q = generate_query(["forward", "end", "left", "end", "left", U], "12")
    assert "second left I take" in q.text
    q = generate_query(["forward", "end", U, "end", "right", "goal-F"], "12")
    assert q.query_type == "single"
    assert "Which direction" in q.text or "which direction" in q.text
    q = generate_query(["forward", "elbow", "either", U], "12")
    assert "elbow" in q.text
    q = generate_query(["forward", "three-way", "forward", U], "12")
    assert "going through" in q.text
    q = generate_query(["forward", "end", U, "goal-F"], "12")
    assert "after getting to" in q.text


def test_single_response_fill_and_remainder():
    # The worked single-query example: the answer fills the slot and the
    # remainder is parsed open-ended and inserted after it.
    state = ConversationState(destination="345",
                              plan=[U, "int-R", "right", "goal-F"])
    state.last_query = generate_query(state.plan, "345")
    assert state.last_query.query_type == "single"
    changed = merge_response(
        state, "you start left, then turn right at the end of the hallway")
    assert changed
    assert state.plan[0] == "left"
    assert "end" in state.plan and "right" in state.plan


def test_unintelligible_response_repeats_query():
    state, out = start_conversation("345")
    state, out = say(state, "mumble mumble")
    assert out.say.startswith(NOT_UNDERSTOOD)
    assert out.say.endswith("Could you tell me how to navigate to 345?")
    assert state.turns_without_change == 1


def test_two_turns_without_change_aborts_with_person_plan():
    state, out = start_conversation("345")
    state, out = say(state, "zzz")
    assert out.abort is None
    state, out = say(state, "qqq")
    assert out.abort == ["right", "person"]
    assert state.finished


def test_timeout_restates_and_repeats():
    state, out = start_conversation("345")
    state, out = conversation_step(state, {"kind": "timeout"})
    assert out.say == f"{NOT_HEARD} Could you tell me how to navigate to 345?"
    state, out = conversation_step(state, {"kind": "timeout"})
    assert out.abort == ["right", "person"]


def test_misunderstood_restores_previous_plan_and_query():
    state, out = start_conversation("345")
    state, out = say(state, "turn around")
    plan_after_first = list(state.plan)
    first_query = out.say
    state, out = say(state, "then turn left")
    assert state.plan != plan_after_first
    state, out = conversation_step(state, {"kind": "misunderstood"})
    assert state.plan == plan_after_first
    assert out.say == first_query


def test_start_over_resets_to_original_query():
    state, out = start_conversation("345")
    state, out = say(state, "turn around")
    state, out = conversation_step(state, {"kind": "start-over"})
    assert state.plan == [U]
    assert out.say == "Could you tell me how to navigate to 345?"


def test_done_emits_thanks_and_complete_plan():
    state, out = start_conversation("1273")
    state, out = say(state, "turn right. then find room 1273.")
    assert out.done is not None
    assert out.say == THANKS
    assert validate_plan(out.done) == COMPLETE


def test_overlong_plan_ends_with_usable_prefix():
    state, out = start_conversation("9")
    state, out = say(
        state,
        "turn left then turn right then turn left then turn right "
        "then turn left then turn right")
    # Conversation must have ended one way or another with <= 10 steps.
    assert state.finished or len(state.plan) <= 10
    if out.done is not None:
        assert len(out.done) <= 10
        assert validate_plan(out.done) == COMPLETE


def test_done_implies_complete_consistent_over_random_dialogues():
    rng = np.random.default_rng(99)
    phrases = [
        "turn left", "turn right", "go straight",
        "turn around", "go to the end of the hall",
        "turn left at the elbow", "turn right at the three-way",
        "you'll see it on your left", "find the room",
        "take your second left", "blah blah",
    ]
    finished = 0
    for _ in range(200):
        state, out = start_conversation("42")
        for _turn in range(8):
            if state.finished:
                break
            n = int(rng.integers(1, 4))
            text = " then ".join(
                phrases[int(rng.integers(len(phrases)))] for _ in range(n))
            state, out = say(state, text + ".")
            if out.done is not None:
                finished += 1
                assert validate_plan(out.done) == COMPLETE
                break
            if out.abort is not None:
                break
    assert finished > 20
