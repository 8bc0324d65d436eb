// Client view state: nothing here decides engine behavior. The view is the
// latest snapshot plus cosmetic bookkeeping (fade clocks, banner text);
// applying a fresh snapshot after a reconnect reproduces the same frame.

import type {
  CueEventBody,
  MarkerView,
  SceneDoc,
  ServerMessage,
  SessionStartMsg,
  StateSnapshotMsg,
} from "./protocol.js";

export type Phase = "Idle" | "Waiting" | "Running" | "Complete" | "Ended";

export interface ViewState {
  scene: SceneDoc | null;
  sessionId: string | null;
  markers: MarkerView[];
  activeIndex: number | null;
  phase: Phase;
  lastSnapshotSeq: number;
  engineT: number;
  acquiredCount: number;
  // wall-clock ms at which each marker was seen Acquired; drives the fade
  acquiredAtMs: Map<number, number>;
  hazardRevealed: boolean;
  tHazardS: number | null;
  audioOn: boolean;
  error: string | null;
}

export function initialView(): ViewState {
  return {
    scene: null,
    sessionId: null,
    markers: [],
    activeIndex: null,
    phase: "Idle",
    lastSnapshotSeq: 0,
    engineT: 0,
    acquiredCount: 0,
    acquiredAtMs: new Map(),
    hazardRevealed: false,
    tHazardS: null,
    audioOn: false,
    error: null,
  };
}

export function applyStart(view: ViewState, msg: SessionStartMsg): void {
  view.scene = msg.scene;
  view.sessionId = msg.session_id;
  view.markers = msg.markers;
  view.activeIndex = null;
  view.phase = "Waiting";
  view.acquiredAtMs.clear();
  view.hazardRevealed = false;
  view.tHazardS = null;
  view.error = null;
}

export function applySnapshot(view: ViewState, msg: StateSnapshotMsg, nowMs: number): void {
  if (msg.seq <= view.lastSnapshotSeq) {
    return; // stale (snapshots may be dropped, never reordered)
  }
  view.lastSnapshotSeq = msg.seq;
  view.engineT = msg.t;
  view.markers = msg.markers;
  view.activeIndex = msg.active_index;
  view.acquiredCount = msg.acquired_count;
  view.phase = msg.phase as Phase;
  const hazardIdx = msg.markers.length - 1;
  for (const m of msg.markers) {
    if (m.state === "Acquired" && !view.acquiredAtMs.has(m.index)) {
      view.acquiredAtMs.set(m.index, nowMs);
    }
    if (m.index === hazardIdx && m.state !== "Pending") {
      view.hazardRevealed = true;
    }
  }
}

export function applyCueEvent(view: ViewState, ev: CueEventBody, nowMs: number): void {
  const hazardIdx = view.markers.length - 1;
  switch (ev.kind) {
    case "MarkerActivated": {
      if (view.phase === "Waiting") view.phase = "Running";
      view.activeIndex = ev.marker_index;
      if (ev.marker_index === hazardIdx) view.hazardRevealed = true;
      const m = ev.marker_index !== null ? view.markers[ev.marker_index] : undefined;
      if (m) {
        m.state = "Active";
        m.activated_t = ev.t;
        if (ev.urgency) m.urgency = ev.urgency;
      }
      break;
    }
    case "MarkerAcquired": {
      const m = ev.marker_index !== null ? view.markers[ev.marker_index] : undefined;
      if (m) {
        m.state = "Acquired";
        m.acquired_t = ev.t;
      }
      if (ev.marker_index !== null && !view.acquiredAtMs.has(ev.marker_index)) {
        view.acquiredAtMs.set(ev.marker_index, nowMs);
      }
      if (ev.marker_index === hazardIdx) {
        view.tHazardS = ev.t;
      }
      break;
    }
    case "Escalated": {
      const m = ev.marker_index !== null ? view.markers[ev.marker_index] : undefined;
      if (m && ev.urgency) m.urgency = ev.urgency;
      break;
    }
    case "Complete":
      view.phase = "Complete";
      view.activeIndex = null;
      break;
    case "Deviation":
      break; // informational; the engine replans on its own
  }
}

export function applyServerMessage(view: ViewState, msg: ServerMessage, nowMs: number): void {
  switch (msg.kind) {
    case "SessionStart":
      applyStart(view, msg);
      break;
    case "StateSnapshot":
      applySnapshot(view, msg, nowMs);
      break;
    case "CueEventMsg":
      applyCueEvent(view, msg.event, nowMs);
      break;
    case "SessionEnd":
      if (view.phase !== "Complete") view.phase = "Ended";
      if (typeof msg.metrics["t_hazard_s"] === "number") {
        view.tHazardS = msg.metrics["t_hazard_s"] as number;
      }
      break;
    case "Error":
      view.error = `${msg.code}: ${msg.detail}`;
      break;
    case "AudioEventMsg":
      break; // handled by the audio player, not the view
  }
}
