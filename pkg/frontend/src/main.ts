// Cockpit bootstrap: scene picker, canvas, pointer capture, audio unlock.

import { AlertPlayer } from "./audio.js";
import { SessionClient } from "./client.js";
import { GazeSender, pointerToGaze } from "./pointer.js";
import { drawFrame } from "./render.js";
import { applyServerMessage, initialView } from "./view.js";

const API_BASE = (window as { GAZEGUIDE_API?: string }).GAZEGUIDE_API
  ?? `${location.protocol}//${location.hostname}:8000`;

const canvas = document.getElementById("cockpit") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const scenePicker = document.getElementById("scene") as HTMLSelectElement;
const connectBtn = document.getElementById("connect") as HTMLButtonElement;
const endBtn = document.getElementById("end") as HTMLButtonElement;
const statusEl = document.getElementById("status") as HTMLSpanElement;

const view = initialView();
const player = new AlertPlayer();
let client: SessionClient | null = null;
let sender: GazeSender | null = null;
let pumpTimer: number | null = null;

async function loadScenes(): Promise<void> {
  try {
    const resp = await fetch(`${API_BASE}/scenes`);
    const scenes = (await resp.json()) as { id: string; object_count: number }[];
    scenePicker.innerHTML = "";
    for (const s of scenes) {
      const opt = document.createElement("option");
      opt.value = s.id;
      opt.textContent = `${s.id} (${s.object_count} objects)`;
      scenePicker.appendChild(opt);
    }
    statusEl.textContent = `${scenes.length} scenes`;
  } catch {
    statusEl.textContent = `cannot reach ${API_BASE}/scenes`;
  }
}

function connect(): void {
  client?.close();
  view.audioOn = player.unlock(); // user gesture: safe to unlock audio here
  client = new SessionClient(API_BASE, scenePicker.value);
  sender = new GazeSender((t, x, y, valid) => client?.sendGaze(t, x, y, valid));
  client.onMessage = (msg) => {
    if (msg.kind === "AudioEventMsg" && view.audioOn) {
      player.play(msg.event);
    }
    applyServerMessage(view, msg, performance.now());
    if (msg.kind === "SessionEnd") {
      stopPump();
      statusEl.textContent = `session ${msg.replay_token} saved`;
    }
  };
  client.onOpen = () => {
    statusEl.textContent = "connected";
    startPump();
  };
  client.onClose = () => stopPump();
  client.onProtocolError = (err) => {
    view.error = err.message;
  };
  client.connect();
}

function startPump(): void {
  if (pumpTimer !== null) return;
  pumpTimer = window.setInterval(() => sender?.pump(performance.now()), 8);
}

function stopPump(): void {
  if (pumpTimer !== null) {
    window.clearInterval(pumpTimer);
    pumpTimer = null;
  }
}

canvas.addEventListener("pointermove", (ev) => {
  const gaze = pointerToGaze(canvas.getBoundingClientRect(), ev.clientX, ev.clientY);
  sender?.setPointer(gaze.x, gaze.y, gaze.inside);
});
canvas.addEventListener("pointerleave", () => {
  sender?.setPointer(0.5, 0.5, false);
});
connectBtn.addEventListener("click", connect);
endBtn.addEventListener("click", () => client?.requestEnd());

function frame(): void {
  drawFrame(ctx, view, performance.now(), canvas.width, canvas.height);
  requestAnimationFrame(frame);
}

void loadScenes();
requestAnimationFrame(frame);
