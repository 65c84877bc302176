from .actions import (
    DIR_ACTIONS, GOAL_ACTIONS, INT_ACTIONS, UNFILLED,
    MAX_PLAN_STEPS, is_dir, is_goal, is_int, kind_of,
)
from .rewrite import RewriteDivergence, apply_rewrite_rules, find_rule_match
from .validate import validate_plan
from .extract import chunk_utterance, extract_actions, sanitize_utterance
from .queries import generate_query
from .conversation import ConversationState, conversation_step, merge_response, start_conversation

__all__ = [
    "DIR_ACTIONS", "GOAL_ACTIONS", "INT_ACTIONS", "UNFILLED",
    "MAX_PLAN_STEPS", "ConversationState", "RewriteDivergence",
    "apply_rewrite_rules", "chunk_utterance", "conversation_step",
    "extract_actions", "find_rule_match", "generate_query", "is_dir",
    "is_goal", "is_int", "kind_of", "merge_response", "sanitize_utterance",
    "start_conversation", "validate_plan",
]
