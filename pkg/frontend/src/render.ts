// Canvas renderer: the windshield plane drawn top-down. Objects are neutral
// boxes, the hazard stays unmarked until its cue activates, and exactly the
// engine-reported marker states/styles are drawn.

import { COLOR_HEX, fadeOpacity, pulseOpacity, STYLE_FOR } from "./styles.js";
import type { MarkerView } from "./protocol.js";
import type { ViewState } from "./view.js";

const FADE_S = 0.5;

function px(v: number, extent: number): number {
  return v * extent;
}

function drawArrow(ctx: CanvasRenderingContext2D, x: number, y: number, color: string,
                   alpha: number): void {
  ctx.save();
  ctx.globalAlpha = Math.max(0, Math.min(1, alpha));
  ctx.fillStyle = color;
  ctx.strokeStyle = color;
  // chevron above the target pointing down at it
  ctx.beginPath();
  ctx.moveTo(x, y - 14);
  ctx.lineTo(x - 12, y - 34);
  ctx.lineTo(x - 4, y - 34);
  ctx.lineTo(x, y - 26);
  ctx.lineTo(x + 4, y - 34);
  ctx.lineTo(x + 12, y - 34);
  ctx.closePath();
  ctx.fill();
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(x, y, 10, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.restore();
}

function markerAlpha(view: ViewState, m: MarkerView, nowMs: number): number {
  if (m.state === "Active") {
    return pulseOpacity(m.style, nowMs / 1000);
  }
  if (m.state === "Acquired") {
    const seenMs = view.acquiredAtMs.get(m.index);
    if (seenMs === undefined) return 0;
    return fadeOpacity((nowMs - seenMs) / 1000, FADE_S);
  }
  return 0; // pending markers stay hidden: cues are sequential
}

export function drawFrame(ctx: CanvasRenderingContext2D, view: ViewState,
                          nowMs: number, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, width, height);

  if (!view.scene) {
    ctx.fillStyle = "#9aa3ad";
    ctx.font = "16px system-ui, sans-serif";
    ctx.fillText("pick a scene and connect", 24, 32);
    return;
  }

  // scene objects: neutral boxes
  for (const obj of view.scene.objects) {
    const [cx, cy] = obj.centroid;
    const [hx, hy] = obj.half_extent;
    ctx.fillStyle = "rgba(150, 160, 175, 0.25)";
    ctx.strokeStyle = "rgba(150, 160, 175, 0.8)";
    ctx.lineWidth = 1;
    ctx.fillRect(px(cx - hx, width), px(cy - hy, height), px(2 * hx, width), px(2 * hy, height));
    ctx.strokeRect(px(cx - hx, width), px(cy - hy, height), px(2 * hx, width), px(2 * hy, height));
    ctx.fillStyle = "rgba(150, 160, 175, 0.9)";
    ctx.font = "11px system-ui, sans-serif";
    ctx.fillText(obj.id, px(cx - hx, width), px(cy - hy, height) - 4);
  }

  // distraction anchor
  const [dx, dy] = view.scene.distraction_point;
  ctx.strokeStyle = "#5b8def";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(px(dx, width), px(dy, height), 7, 0, 2 * Math.PI);
  ctx.stroke();

  // hazard appears only once its marker has activated
  if (view.hazardRevealed) {
    const [hx, hy] = view.scene.hazard.position;
    const x = px(hx, width);
    const y = px(hy, height);
    ctx.strokeStyle = "#ff3b30";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(x - 9, y - 9);
    ctx.lineTo(x + 9, y + 9);
    ctx.moveTo(x + 9, y - 9);
    ctx.lineTo(x - 9, y + 9);
    ctx.stroke();
  }

  for (const m of view.markers) {
    const alpha = markerAlpha(view, m, nowMs);
    if (alpha <= 0) continue;
    const style = m.state === "Active" ? STYLE_FOR[m.urgency] : m.style;
    const color = COLOR_HEX[style.color] ?? COLOR_HEX["Neutral"]!;
    drawArrow(ctx, px(m.position[0], width), px(m.position[1], height), color, alpha);
  }

  // status line + completion banner
  ctx.fillStyle = "#9aa3ad";
  ctx.font = "13px system-ui, sans-serif";
  const audio = view.audioOn ? "audio on" : "audio off";
  ctx.fillText(`${view.phase}  t=${view.engineT.toFixed(2)}s  ${audio}`, 12, height - 12);
  if (view.error) {
    ctx.fillStyle = "#ff3b30";
    ctx.fillText(view.error, 12, height - 30);
  }
  if (view.phase === "Complete" || view.phase === "Ended") {
    ctx.fillStyle = "rgba(16, 20, 24, 0.85)";
    ctx.fillRect(width / 2 - 170, height / 2 - 34, 340, 68);
    ctx.strokeStyle = "#5b8def";
    ctx.strokeRect(width / 2 - 170, height / 2 - 34, 340, 68);
    ctx.fillStyle = "#e8e8ee";
    ctx.font = "16px system-ui, sans-serif";
    ctx.textAlign = "center";
    const line = view.phase === "Complete" && view.tHazardS !== null
      ? `hazard acquired at t=${view.tHazardS.toFixed(2)}s`
      : "session ended";
    ctx.fillText(line, width / 2, height / 2 + 5);
    ctx.textAlign = "left";
  }
}
