"""Per-behavior and overall success metrics over trial records."""

from __future__ import annotations

from .runner import TrialRecord

BEHAVIORS = ("Wander", "Approach_person", "Hold_conversation",
             "Follow_directions", "Navigate_door")

# Leaving a behavior along its success edge, keyed by (from, to).
SUCCESS_EDGES = {
    ("Wander", "Approach_person"),
    ("Approach_person", "Hold_conversation"),
    ("Hold_conversation", "Follow_directions"),
    ("Follow_directions", "Navigate_door"),
    ("Navigate_door", "Done"),
}


def _instances(record: TrialRecord) -> list[tuple[str, str]]:
    """(behavior, next_state) per behavior instance in one record."""
    transitions = [r["payload"] for r in record.log.of_kind("transition")]
    out = []
    state = "Wander"
    for tr in transitions:
        out.append((state, tr["to"]))
        state = tr["to"]
    # The final (possibly unfinished) instance counts as an instance too.
    out.append((state, ""))
    return out


def compute_metrics(records: list[TrialRecord]) -> dict:
    if not records:
        raise ValueError("need at least one record")
    successes = sum(1 for r in records if r.outcome == "success")
    per_plan: dict[str, dict] = {}
    for r in records:
        slot = per_plan.setdefault(r.config.floorplan,
                                   {"successes": 0, "total": 0})
        slot["total"] += 1
        if r.outcome == "success":
            slot["successes"] += 1
    for slot in per_plan.values():
        slot["success_rate"] = slot["successes"] / slot["total"]

    behavior_stats = {}
    for behavior in BEHAVIORS:
        total = 0
        succeeded = 0
        for r in records:
            for (state, nxt) in _instances(r):
                if state != behavior:
                    continue
                total += 1
                if (state, nxt) in SUCCESS_EDGES:
                    succeeded += 1
                # A person-goal handoff is a successful execution too.
                elif state == "Follow_directions" and nxt == "Wander":
                    plans = [p["payload"] for p in r.log.of_kind("plan")]
                    if plans and plans[-1]["steps"][-1:] == ["person"]:
                        succeeded += 1
        behavior_stats[behavior] = {
            "total_instances": total,
            "instances_per_trial": round(total / len(records), 2),
            "success_rate": round(succeeded / total, 3) if total else None,
        }

    return {
        "trials": len(records),
        "successes": successes,
        "success_rate": round(successes / len(records), 3),
        "per_floorplan": per_plan,
        "behaviors": behavior_stats,
    }
