// Marker presentation. The table must match the engine's urgency mapping
// exactly; the UI renders styles, it never decides them.

import type { StyleDict, Urgency } from "./protocol.js";

export const STYLE_FOR: Record<Urgency, StyleDict> = {
  Low: { shape: "Arrow", color: "Neutral", pulsing: false, pulse_period_s: 0.0 },
  Medium: { shape: "Arrow", color: "Yellow", pulsing: true, pulse_period_s: 0.8 },
  High: { shape: "Arrow", color: "Red", pulsing: true, pulse_period_s: 0.4 },
};

export const COLOR_HEX: Record<string, string> = {
  Neutral: "#e8e8ee",
  Yellow: "#ffcc33",
  Red: "#ff3b30",
};

/** Opacity oscillation for pulsing cues; non-pulsing styles stay fully opaque. */
export function pulseOpacity(style: StyleDict, tSeconds: number): number {
  if (!style.pulsing || style.pulse_period_s <= 0) {
    return 1.0;
  }
  const phase = (2 * Math.PI * tSeconds) / style.pulse_period_s;
  return 0.625 + 0.375 * Math.cos(phase);
}

/** Linear fade for acquired markers: 1 at acquisition, 0 after fadeS. */
export function fadeOpacity(elapsedS: number, fadeS = 0.5): number {
  if (elapsedS <= 0) return 1.0;
  if (elapsedS >= fadeS) return 0.0;
  return 1.0 - elapsedS / fadeS;
}
