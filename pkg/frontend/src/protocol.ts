// Wire types for the /session WebSocket (schema_version 1, docs/protocol.md).

export type Urgency = "Low" | "Medium" | "High";
export type MarkerState = "Pending" | "Active" | "Acquired";

export interface StyleDict {
  shape: string;
  color: string;
  pulsing: boolean;
  pulse_period_s: number;
}

export interface MarkerView {
  index: number;
  position: [number, number];
  state: MarkerState;
  urgency: Urgency;
  style: StyleDict;
  activated_t: number | null;
  acquired_t: number | null;
}

export interface SceneObjectDoc {
  id: string;
  centroid: [number, number];
  half_extent: [number, number];
  salience_weight: number;
  moving: boolean;
}

export interface SceneDoc {
  id: string;
  duration_s: number;
  hazard: { position: [number, number]; severity: string };
  distraction_point: [number, number];
  objects: SceneObjectDoc[];
}

export interface SessionStartMsg {
  kind: "SessionStart";
  seq: number;
  schema_version: number;
  session_id: string;
  tick_hz: number;
  warmup_s: number;
  scene: SceneDoc;
  markers: MarkerView[];
}

export interface StateSnapshotMsg {
  kind: "StateSnapshot";
  seq: number;
  t: number;
  phase: string;
  complete: boolean;
  active_index: number | null;
  markers: MarkerView[];
  acquired_count: number;
}

export interface CueEventBody {
  t: number;
  kind: "MarkerActivated" | "MarkerAcquired" | "Escalated" | "Deviation" | "Complete";
  marker_index: number | null;
  urgency: Urgency | null;
}

export interface CueEventMsg {
  kind: "CueEventMsg";
  seq: number;
  event: CueEventBody;
}

export interface AudioEventBody {
  t: number;
  kind: "LowTone" | "UrgentBeep";
  frequency_hz: number;
  duration_s: number;
  pan: number;
}

export interface AudioEventMsg {
  kind: "AudioEventMsg";
  seq: number;
  event: AudioEventBody;
}

export interface SessionEndMsg {
  kind: "SessionEnd";
  seq: number;
  metrics: Record<string, unknown>;
  replay_token: string;
}

export interface ErrorMsg {
  kind: "Error";
  seq: number;
  code: string;
  detail: string;
}

export type ServerMessage =
  | SessionStartMsg
  | StateSnapshotMsg
  | CueEventMsg
  | AudioEventMsg
  | SessionEndMsg
  | ErrorMsg;

const SERVER_KINDS = new Set([
  "SessionStart", "StateSnapshot", "CueEventMsg", "AudioEventMsg", "SessionEnd", "Error",
]);

export function parseServerMessage(raw: string): ServerMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new Error(`not JSON: ${raw.slice(0, 120)}`);
  }
  const kind = (doc as { kind?: unknown }).kind;
  if (typeof kind !== "string" || !SERVER_KINDS.has(kind)) {
    throw new Error(`unknown server message kind: ${String(kind)}`);
  }
  return doc as ServerMessage;
}

export interface GazeInput {
  kind: "GazeInput";
  seq: number;
  t: number;
  x: number;
  y: number;
  valid: boolean;
}

export function gazeInput(seq: number, t: number, x: number, y: number, valid: boolean): string {
  const msg: GazeInput = { kind: "GazeInput", seq, t, x, y, valid };
  return JSON.stringify(msg);
}

export function sessionEndRequest(seq: number): string {
  return JSON.stringify({ kind: "SessionEnd", seq });
}
