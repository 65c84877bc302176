#!/usr/bin/env python3
"""Record real wire-protocol frame streams for the operator-UI tests.

Runs two trials through the harness and captures the frames a connected
client would receive, so the UI test suite replays genuine protocol data.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from wayfinder.harness.config import TrialConfig
from wayfinder.harness.runner import Trial
from wayfinder.harness.session import PROTOCOL_VERSION, snapshot_frame

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

TRANSCRIPT2_REPLY = ("yeah, turn around then turn right then your first "
                     "left and then the door will be on your left.")


def record(config: TrialConfig, stream_every: int = 20) -> list[dict]:
    trial = Trial(config)
    frames: list[dict] = [{
        "v": PROTOCOL_VERSION, "type": "hello",
        "goal": config.goal_tag, "floorplan": config.floorplan,
        "walls": trial.plan.walls, "bounds": list(trial.plan.bounds),
        "doors": [{"center": list(d.center), "tag": d.tag}
                  for d in trial.plan.doors],
    }]
    state = {"tick": 0, "sent": 0}

    def on_tick(running):
        state["tick"] += 1
        for rec in running.log.records[state["sent"]:]:
            if rec["kind"] in ("utterance", "plan", "transition", "tag-read",
                               "trial-end"):
                frame = {"v": PROTOCOL_VERSION, "type": rec["kind"],
                         "t": rec["t"]}
                frame.update(rec["payload"])
                frames.append(frame)
        state["sent"] = len(running.log.records)
        if state["tick"] % stream_every == 0:
            frames.append(snapshot_frame(running))

    trial.on_tick = on_tick
    record_result = trial.run()
    frames.append({"v": PROTOCOL_VERSION, "type": "trial-end",
                   "t": round(record_result.sim_seconds, 2),
                   "outcome": record_result.outcome,
                   "reason": record_result.failure_reason})
    return frames


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # A map-rich trial: several intersections, edges, and door clusters.
    frames = record(TrialConfig(floorplan="office_floor", goal_tag="724",
                                seed=2, giver="oracle", wrong_turns=1,
                                max_sim_seconds=540))
    best = max((f for f in frames if f["type"] == "snapshot"),
               key=lambda f: (len(f["door_clusters"]) > 0,
                              len(f["qualitative_map"]["vertices"]),
                              len(f["qualitative_map"]["edges"])))
    print("best snapshot:",
          len(best["qualitative_map"]["vertices"]), "vertices,",
          len(best["qualitative_map"]["edges"]), "edges,",
          len(best["door_clusters"]), "door clusters")
    (OUT / "recorded_session.json").write_text(json.dumps(frames))
    print(f"wrote {OUT / 'recorded_session.json'} ({len(frames)} frames)")

    # The published second conversation, replayed through the harness.
    script = OUT / "_script_plan2.json"
    script.write_text(json.dumps({"responses": [TRANSCRIPT2_REPLY]}))
    frames2 = record(TrialConfig(floorplan="corridor_l", goal_tag="276",
                                 seed=9, giver="scripted",
                                 script=str(script), max_sim_seconds=60))
    script.unlink()
    # Keep the exchange through the first extracted plan only.
    first_plan = next(i for i, f in enumerate(frames2)
                      if f["type"] == "plan")
    frames2 = frames2[:first_plan + 1]
    plans = [f for f in frames2 if f["type"] == "plan"]
    print("plan frames:", [p["steps"] for p in plans])
    (OUT / "conversation_plan2.json").write_text(json.dumps(frames2))
    print(f"wrote {OUT / 'conversation_plan2.json'} ({len(frames2)} frames)")


if __name__ == "__main__":
    main()
