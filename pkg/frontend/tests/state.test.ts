// View-state reducer tests driven by frame streams recorded from real
// harness sessions.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { InboundFrame, SnapshotFrame, parseFrame } from "../src/protocol.js";
import { applyFrame, conversationActive, initialView } from "../src/state.js";
import { misunderstood, planLabel, startOver, submitChat } from "../src/chat.js";

const here = dirname(fileURLToPath(import.meta.url));

function loadFrames(name: string): InboundFrame[] {
  const raw = readFileSync(join(here, "fixtures", name), "utf-8");
  return JSON.parse(raw) as InboundFrame[];
}

const PLAN2 = ["turn-around", "forward", "int-R", "right", "int-L", "left",
               "goal-L"];
const TRANSCRIPT2_REPLY =
  "yeah, turn around then turn right then your first left and then the " +
  "door will be on your left.";

describe("recorded session stream", () => {
  it("accumulates map content from snapshots", () => {
    const frames = loadFrames("recorded_session.json");
    let view = initialView();
    let bestVertices = 0;
    let bestEdges = 0;
    let bestDoors = 0;
    for (const frame of frames) {
      view = applyFrame(view, frame);
      if (view.snapshot) {
        const qm = view.snapshot.qualitative_map;
        bestVertices = Math.max(bestVertices, qm.vertices.length);
        bestEdges = Math.max(bestEdges, qm.edges.length);
        bestDoors = Math.max(bestDoors, view.snapshot.door_clusters.length);
      }
    }
    expect(view.connection).toBe("live");
    expect(view.hello).not.toBeNull();
    expect(bestVertices).toBeGreaterThanOrEqual(3);
    expect(bestEdges).toBeGreaterThanOrEqual(2);
    expect(bestDoors).toBeGreaterThanOrEqual(1);
    expect(view.trialOutcome).not.toBeNull();
  });

  it("chat history is append-only and snapshots never go backward", () => {
    const frames = loadFrames("recorded_session.json");
    let view = initialView();
    let chatLength = 0;
    let lastT = -1;
    for (const frame of frames) {
      view = applyFrame(view, frame);
      expect(view.chat.length).toBeGreaterThanOrEqual(chatLength);
      chatLength = view.chat.length;
      if (view.snapshot) {
        expect(view.snapshot.t).toBeGreaterThanOrEqual(lastT);
        lastT = view.snapshot.t;
      }
    }
  });

  it("stale or malformed frames are skipped and counted", () => {
    let view = initialView();
    view = applyFrame(view, parseFrame("not json at all"));
    expect(view.staleFrames).toBe(1);
    const early: SnapshotFrame = {
      v: 1, type: "snapshot", t: 50.0,
      pose: { x: 0, y: 0, heading: 0 }, state: "Wander", grid_digest: "",
      qualitative_map: { vertices: [], edges: [] }, door_clusters: [],
      path: [],
    };
    const late: SnapshotFrame = { ...early, t: 60.0 };
    view = applyFrame(view, late);
    view = applyFrame(view, early);
    expect(view.snapshot?.t).toBe(60.0);
    expect(view.staleFrames).toBe(2);
  });
});

describe("conversation and plan panel", () => {
  it("typing the published reply yields the published plan", () => {
    const frames = loadFrames("conversation_plan2.json");
    let view = initialView();
    const sent: string[] = [];
    for (const frame of frames) {
      // The robot asks; the operator types the recorded transcript reply.
      view = applyFrame(view, frame);
      if (frame.type === "utterance" && frame.speaker === "robot" &&
          frame.text.includes("navigate to") && sent.length === 0) {
        const decision = submitChat(view, TRANSCRIPT2_REPLY);
        expect(decision.accepted).toBe(true);
        expect(decision.outbound).toEqual(
          { kind: "utterance", text: TRANSCRIPT2_REPLY });
        sent.push(TRANSCRIPT2_REPLY);
      }
    }
    expect(sent.length).toBe(1);
    expect(view.plan).toEqual(PLAN2);
    expect(planLabel(view)).toBe(`[${PLAN2.join(", ")}]`);
  });

  it("chat input is gated outside the conversation", () => {
    let view = initialView();
    expect(conversationActive(view)).toBe(false);
    const rejected = submitChat(view, "hello robot");
    expect(rejected.accepted).toBe(false);
    expect(rejected.outbound).toBeNull();
    view = applyFrame(view, {
      v: 1, type: "transition", t: 5.0, from: "Approach_person",
      to: "Hold_conversation",
    });
    expect(conversationActive(view)).toBe(true);
    expect(submitChat(view, "turn left.").accepted).toBe(true);
    expect(submitChat(view, "   ").accepted).toBe(false);
  });

  it("start-over and misunderstood controls follow the same gate", () => {
    let view = initialView();
    expect(startOver(view).accepted).toBe(false);
    expect(misunderstood(view).accepted).toBe(false);
    view = applyFrame(view, {
      v: 1, type: "transition", t: 5.0, from: "Approach_person",
      to: "Hold_conversation",
    });
    expect(startOver(view).outbound).toEqual({ kind: "start-over" });
    expect(misunderstood(view).outbound).toEqual({ kind: "misunderstood" });
  });

  it("aborted plans are labeled", () => {
    let view = initialView();
    view = applyFrame(view, {
      v: 1, type: "plan", t: 9.0, steps: ["right", "person"], aborted: true,
    });
    expect(planLabel(view)).toContain("(aborted)");
  });
});
