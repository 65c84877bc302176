"""Utterance chunking and keyword-based action extraction.

Chunks split at sentence periods and the connective "then". Within a chunk,
direction keywords anchor extraction: each looks at a window of nearby words
for destination verbs (making a goal), intersection keywords (binding the
turn to that intersection), and ordinal determiners (replicating pass-through
steps). A bare turn with no intersection nearby implies one: "turn right"
becomes the pair [int-R, right] unless the step just before the insertion
point is already an intersection.
"""

from __future__ import annotations

import re
from importlib import resources

from .actions import is_int

CONTEXT_WINDOW = 6     # words each side of a direction keyword
DETERMINER_REACH = 2   # words a determiner may precede its keyword by

_GOAL_BY_DIR = {"left": "goal-L", "right": "goal-R"}
_IMPLIED_INT = {"left": "int-L", "right": "int-R"}


def _load_lexicon() -> list[tuple[tuple[str, ...], str]]:
    text = (resources.files("wayfinder.dialogue") / "lexicon.txt").read_text(
        encoding="utf-8")
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        phrase, _, token = line.partition("=>")
        words = tuple(phrase.strip().lower().split())
        entries.append((words, token.strip()))
    entries.sort(key=lambda e: -len(e[0]))
    return entries


_LEXICON = _load_lexicon()


def sanitize_utterance(text: str) -> str:
    """Drop non-ASCII characters; the pipeline guarantees plain text."""
    return text.encode("ascii", "ignore").decode("ascii")


def chunk_utterance(text: str) -> list[str]:
    """Lowercased chunks split at '.', '?', '!', ';' and '(and) then'."""
    text = sanitize_utterance(text).lower()
    pieces = re.split(r"[.?!;]", text)
    chunks = []
    for piece in pieces:
        for part in re.split(r"\b(?:and\s+)?then\b", piece):
            part = part.strip(" ,\t")
            if part:
                chunks.append(part)
    return chunks


def _tokenize(chunk: str) -> list[str]:
    cleaned = re.sub(r"[^a-z0-9\s'-]", " ", chunk.lower())
    cleaned = cleaned.replace("'", "")
    return cleaned.split()


class _Hit:
    __slots__ = ("token", "start", "end", "consumed")

    def __init__(self, token: str, start: int, end: int):
        self.token = token
        self.start = start
        self.end = end
        self.consumed = False


def _scan(tokens: list[str]) -> list[_Hit]:
    hits: list[_Hit] = []
    taken = [False] * len(tokens)
    for words, token in _LEXICON:
        n = len(words)
        for i in range(len(tokens) - n + 1):
            if any(taken[i:i + n]):
                continue
            if tuple(tokens[i:i + n]) == words:
                hits.append(_Hit(token, i, i + n - 1))
                for j in range(i, i + n):
                    taken[j] = True
    hits.sort(key=lambda h: h.start)
    return hits


def _determiner_for(hits: list[_Hit], target: _Hit) -> int | None:
    for h in hits:
        if not h.token.startswith("det:") or h.consumed:
            continue
        if 0 <= target.start - h.end <= DETERMINER_REACH:
            h.consumed = True
            value = h.token.split(":", 1)[1]
            if value == "last":
                return None  # "the last left": no replication count known
            return int(value)
    return None


def extract_actions(chunk: str, preceding: str | None = None) -> list[str]:
    """Actions extracted from one lowercased chunk.

    ``preceding`` is the plan action just before the insertion point (or the
    last action already extracted from this utterance); it decides whether a
    bare turn needs an implied intersection before it.
    """
    tokens = _tokenize(chunk)
    if not tokens:
        return []
    hits = _scan(tokens)
    dir_hits = [h for h in hits if h.token.startswith("dir:")]
    int_hits = [h for h in hits if h.token.startswith("int:")]
    verb_hits = [h for h in hits if h.token == "verb:dest"]

    emissions: list[tuple[float, list[str]]] = []
    goal_emitted = False

    def last_action() -> str | None:
        ordered = [a for _, acts in sorted(emissions, key=lambda e: e[0])
                   for a in acts]
        return ordered[-1] if ordered else preceding

    for d in dir_hits:
        action = d.token.split(":", 1)[1]
        window_lo = d.start - CONTEXT_WINDOW
        window_hi = d.end + CONTEXT_WINDOW

        verb = next((v for v in verb_hits
                     if not v.consumed and window_lo <= v.start <= d.start), None)
        if verb is not None and action in ("left", "right"):
            verb.consumed = True
            emissions.append((float("inf"), [_GOAL_BY_DIR[action]]))
            goal_emitted = True
            continue
        if action == "turn-around":
            emissions.append((d.start, ["turn-around"]))
            continue
        if action in ("forward", "either"):
            emissions.append((d.start, [action]))
            continue

        bound = None
        best_gap = None
        for i_hit in int_hits:
            if i_hit.consumed:
                continue
            if window_lo <= i_hit.start <= window_hi or \
                    window_lo <= i_hit.end <= window_hi:
                gap = min(abs(i_hit.start - d.end), abs(d.start - i_hit.end))
                if best_gap is None or gap < best_gap:
                    bound, best_gap = i_hit, gap
        if bound is not None:
            bound.consumed = True
            int_action = bound.token.split(":", 1)[1]
            if int_action == "generic":
                int_action = _IMPLIED_INT[action]
            count = _determiner_for(hits, bound)
            if count:
                steps = ["forward", int_action] * count + [action]
            else:
                steps = [int_action, action]
            emissions.append((min(d.start, bound.start), steps))
            continue

        count = _determiner_for(hits, d)
        if count:
            emissions.append(
                (d.start, ["forward", _IMPLIED_INT[action]] * count + [action]))
        else:
            prev = last_action()
            if prev is not None and is_int(prev):
                emissions.append((d.start, [action]))
            else:
                emissions.append((d.start, [_IMPLIED_INT[action], action]))

    for i_hit in int_hits:
        if i_hit.consumed:
            continue
        int_action = i_hit.token.split(":", 1)[1]
        if int_action == "generic":
            continue
        count = _determiner_for(hits, i_hit)
        steps = ["forward", int_action] * count if count else [int_action]
        emissions.append((i_hit.start, steps))

    if not goal_emitted and verb_hits and not dir_hits:
        if any(not v.consumed for v in verb_hits):
            emissions.append((float("inf"), ["goal-F"]))

    ordered = []
    for _, acts in sorted(emissions, key=lambda e: e[0]):
        ordered.extend(acts)
    return ordered


def first_direction_hit(text: str) -> tuple[str, str] | None:
    """First direction keyword in a raw utterance: (action, remainder)."""
    tokens = _tokenize(sanitize_utterance(text))
    hits = _scan(tokens)
    for h in hits:
        if h.token.startswith("dir:"):
            remainder = " ".join(tokens[h.end + 1:])
            return h.token.split(":", 1)[1], remainder
    return None
