// Session view state: a pure reducer over inbound frames. The UI renders
// from this state only; closing the client never affects the trial.

import { InboundFrame, SnapshotFrame, HelloFrame } from "./protocol.js";

export interface ChatEntry {
  speaker: "robot" | "person";
  text: string;
  t: number;
}

export interface SessionView {
  connection: "connecting" | "live" | "closed";
  hello: HelloFrame | null;
  snapshot: SnapshotFrame | null;
  staleFrames: number;
  chat: ChatEntry[];
  plan: string[] | null;
  planAborted: boolean;
  brainState: string;
  trialOutcome: string | null;
  lastError: string | null;
}

export function initialView(): SessionView {
  return {
    connection: "connecting",
    hello: null,
    snapshot: null,
    staleFrames: 0,
    chat: [],
    plan: null,
    planAborted: false,
    brainState: "Wander",
    trialOutcome: null,
    lastError: null,
  };
}

export function conversationActive(view: SessionView): boolean {
  return view.brainState === "Hold_conversation" && view.trialOutcome === null;
}

// Chat history is append-only; snapshots only ever move forward in time.
export function applyFrame(view: SessionView, frame: InboundFrame | null):
    SessionView {
  if (frame === null) {
    return { ...view, staleFrames: view.staleFrames + 1 };
  }
  switch (frame.type) {
    case "hello":
      return { ...view, connection: "live", hello: frame };
    case "snapshot": {
      if (view.snapshot !== null && frame.t < view.snapshot.t) {
        return { ...view, staleFrames: view.staleFrames + 1 };
      }
      return { ...view, snapshot: frame, brainState: frame.state };
    }
    case "utterance":
      return {
        ...view,
        chat: [...view.chat,
               { speaker: frame.speaker, text: frame.text, t: frame.t }],
      };
    case "plan":
      return { ...view, plan: frame.steps, planAborted: !!frame.aborted };
    case "transition":
      return { ...view, brainState: frame.to };
    case "trial-end":
      return { ...view, trialOutcome: frame.outcome };
    case "error":
      return { ...view, lastError: frame.text };
    default:
      return view;
  }
}
