"""Multi-turn conversation control: queries, merging, and corner cases.

The controller keeps a partial plan, asks about the first unfilled step,
merges each response, and finishes when the plan is complete and consistent.
Going two turns without the plan changing, or ending up with an inconsistent
plan, aborts with the short plan [right, person] that rotates the robot away
to look for someone else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import MAX_PLAN_STEPS, UNFILLED, is_goal, is_int
from .extract import chunk_utterance, extract_actions, first_direction_hit, \
    sanitize_utterance
from .queries import Query, generate_query
from .rewrite import RewriteDivergence, apply_rewrite_rules
from .validate import COMPLETE, INCONSISTENT, validate_plan

THANKS = "Thanks for your help. Have a great day!"
NOT_HEARD = "I did not hear you."
NOT_UNDERSTOOD = "I did not understand that."
ABORT_PLAN = ["right", "person"]


@dataclass
class ConversationState:
    destination: str
    plan: list[str] = field(default_factory=lambda: [UNFILLED])
    previous_plan: list[str] = field(default_factory=lambda: [UNFILLED])
    last_query: Query | None = None
    previous_query: Query | None = None
    turns_without_change: int = 0
    finished: bool = False


@dataclass
class ConversationOutput:
    say: str | None = None
    done: list[str] | None = None
    abort: list[str] | None = None


def start_conversation(destination: str) -> tuple[ConversationState,
                                                  ConversationOutput]:
    state = ConversationState(destination=destination)
    query = generate_query(state.plan, destination)
    state.last_query = query
    return state, ConversationOutput(say=query.text)


def merge_response(state: ConversationState, utterance: str) -> bool:
    """Merge one response into the plan; True if the plan changed."""
    if state.last_query is None:
        raise RuntimeError("no query pending")
    if UNFILLED not in state.plan:
        return False
    utterance = sanitize_utterance(utterance)
    before = list(state.plan)
    slot = state.plan.index(UNFILLED)

    if state.last_query.query_type == "single":
        hit = first_direction_hit(utterance)
        if hit is None:
            return False
        action, remainder = hit
        plan = list(state.plan)
        plan[slot] = action
        extra: list[str] = []
        prev = action
        for chunk in chunk_utterance(remainder):
            acts = extract_actions(chunk, preceding=prev)
            extra.extend(acts)
            if acts:
                prev = acts[-1]
        plan[slot + 1:slot + 1] = extra
    else:
        actions: list[str] = []
        prev = state.plan[slot - 1] if slot > 0 else None
        for chunk in chunk_utterance(utterance):
            acts = extract_actions(chunk, preceding=prev)
            actions.extend(acts)
            if acts:
                prev = acts[-1]
        if not actions:
            return False
        plan = list(state.plan)
        plan[slot:slot + 1] = actions

    try:
        plan = apply_rewrite_rules(plan)
    except RewriteDivergence:
        state.plan = plan[:MAX_PLAN_STEPS]
        return True
    changed = plan != before
    if changed:
        state.previous_plan = before
        state.previous_query = state.last_query
    state.plan = plan
    return changed


def _usable_prefix(plan: list[str]) -> list[str]:
    """The executable front of an over-long or truncated plan."""
    if UNFILLED in plan:
        plan = plan[:plan.index(UNFILLED)]
    plan = plan[:MAX_PLAN_STEPS - 1]
    while plan and is_int(plan[-1]):
        plan = plan[:-1]
    if not plan:
        return list(ABORT_PLAN)
    if not is_goal(plan[-1]):
        plan = plan + ["person"]
    return plan


def conversation_step(state: ConversationState, event: dict
                      ) -> tuple[ConversationState, ConversationOutput]:
    """Advance the conversation by one event.

    Events: {"kind": "utterance", "text": ...}, {"kind": "timeout"},
    {"kind": "misunderstood"}, {"kind": "start-over"}.
    """
    kind = event.get("kind")
    if kind == "timeout":
        state.turns_without_change += 1
        if state.turns_without_change >= 2:
            state.finished = True
            return state, ConversationOutput(say=THANKS, abort=list(ABORT_PLAN))
        return state, ConversationOutput(
            say=f"{NOT_HEARD} {state.last_query.text}")

    if kind == "misunderstood":
        state.plan = list(state.previous_plan)
        state.last_query = state.previous_query or state.last_query
        return state, ConversationOutput(say=state.last_query.text)

    if kind == "start-over":
        state.plan = [UNFILLED]
        state.previous_plan = [UNFILLED]
        state.turns_without_change = 0
        query = generate_query(state.plan, state.destination)
        state.last_query = query
        return state, ConversationOutput(say=query.text)

    if kind != "utterance":
        raise ValueError(f"unknown conversation event {kind!r}")

    changed = merge_response(state, event.get("text", ""))
    if changed:
        state.turns_without_change = 0
    else:
        state.turns_without_change += 1
        if state.turns_without_change >= 2:
            state.finished = True
            return state, ConversationOutput(say=THANKS, abort=list(ABORT_PLAN))
        return state, ConversationOutput(
            say=f"{NOT_UNDERSTOOD} {state.last_query.text}")

    verdict = validate_plan(state.plan)
    if verdict == COMPLETE:
        state.finished = True
        return state, ConversationOutput(say=THANKS, done=list(state.plan))
    if len(state.plan) >= MAX_PLAN_STEPS:
        state.finished = True
        return state, ConversationOutput(say=THANKS,
                                         done=_usable_prefix(state.plan))
    if verdict == INCONSISTENT:
        state.finished = True
        return state, ConversationOutput(say=THANKS, abort=list(ABORT_PLAN))

    query = generate_query(state.plan, state.destination)
    state.last_query = query
    return state, ConversationOutput(say=query.text)
