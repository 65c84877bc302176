// Wire protocol v1 frames, matching the harness session service.

export const PROTOCOL_VERSION = 1;

export interface HelloFrame {
  v: number;
  type: "hello";
  goal: string;
  floorplan: string;
  walls: number[][];
  bounds: [number, number, number, number];
  doors: { center: [number, number]; tag: string }[];
}

export interface Hallway {
  id: number;
  heading: number;
  target: [number, number];
  active: boolean;
  visited_at: number | null;
}

export interface QualitativeMapDump {
  vertices: {
    id: number;
    location: [number, number];
    type: string;
    hallways: Hallway[];
  }[];
  edges: { int_a: number; hall_a: number; int_b: number; hall_b: number;
           weight: number }[];
}

export interface SnapshotFrame {
  v: number;
  type: "snapshot";
  t: number;
  pose: { x: number; y: number; heading: number };
  state: string;
  grid_digest: string;
  qualitative_map: QualitativeMapDump;
  door_clusters: { center: [number, number]; side: string; index: number;
                   count: number }[];
  path: [number, number][];
}

export interface UtteranceFrame {
  v: number;
  type: "utterance";
  t: number;
  speaker: "robot" | "person";
  text: string;
}

export interface PlanFrame {
  v: number;
  type: "plan";
  t: number;
  steps: string[];
  aborted?: boolean;
}

export interface TransitionFrame {
  v: number;
  type: "transition";
  t: number;
  from: string;
  to: string;
  reason?: string;
}

export interface TrialEndFrame {
  v: number;
  type: "trial-end";
  t: number;
  outcome: string;
  reason?: string | null;
}

export interface ErrorFrame {
  v: number;
  type: "error";
  text: string;
}

export type InboundFrame =
  | HelloFrame
  | SnapshotFrame
  | UtteranceFrame
  | PlanFrame
  | TransitionFrame
  | TrialEndFrame
  | ErrorFrame;

export interface OutboundUtterance {
  kind: "utterance";
  text: string;
}

export interface OutboundControl {
  kind: "misunderstood" | "start-over" | "control";
  action?: string;
}

export type OutboundMessage = OutboundUtterance | OutboundControl;

export function parseFrame(raw: string): InboundFrame | null {
  try {
    const data = JSON.parse(raw);
    if (typeof data !== "object" || data === null || !("type" in data)) {
      return null;
    }
    return data as InboundFrame;
  } catch {
    return null;
  }
}
