// Chat panel logic: turn-taking gate and outbound message construction.
// Input is enabled only inside Hold_conversation, mirroring the robot's
// microphone/speaker mutual exclusion.

import { OutboundMessage } from "./protocol.js";
import { SessionView, conversationActive } from "./state.js";

export interface ChatDecision {
  accepted: boolean;
  outbound: OutboundMessage | null;
  reason: string;
}

export function submitChat(view: SessionView, text: string): ChatDecision {
  if (!conversationActive(view)) {
    return {
      accepted: false,
      outbound: null,
      reason: "input is enabled during the conversation only",
    };
  }
  const trimmed = text.trim();
  if (trimmed.length === 0) {
    return { accepted: false, outbound: null, reason: "empty message" };
  }
  return {
    accepted: true,
    outbound: { kind: "utterance", text: trimmed },
    reason: "",
  };
}

export function startOver(view: SessionView): ChatDecision {
  if (!conversationActive(view)) {
    return {
      accepted: false,
      outbound: null,
      reason: "start over is available during the conversation only",
    };
  }
  return { accepted: true, outbound: { kind: "start-over" }, reason: "" };
}

export function misunderstood(view: SessionView): ChatDecision {
  if (!conversationActive(view)) {
    return {
      accepted: false,
      outbound: null,
      reason: "available during the conversation only",
    };
  }
  return { accepted: true, outbound: { kind: "misunderstood" }, reason: "" };
}

export function planLabel(view: SessionView): string {
  if (view.plan === null) {
    return "(no plan yet)";
  }
  const text = `[${view.plan.join(", ")}]`;
  return view.planAborted ? `${text} (aborted)` : text;
}
