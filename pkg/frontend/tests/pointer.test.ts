import { describe, expect, it } from "vitest";

import { GazeSender, pointerToGaze } from "../src/pointer.js";

const RECT = { left: 100, top: 50, width: 800, height: 400 };

describe("pointerToGaze", () => {
  it("maps the canvas center to (0.5, 0.5)", () => {
    const g = pointerToGaze(RECT, 500, 250);
    expect(g).toEqual({ x: 0.5, y: 0.5, inside: true });
  });

  it("maps corners to the unit square corners", () => {
    expect(pointerToGaze(RECT, 100, 50)).toEqual({ x: 0, y: 0, inside: true });
    expect(pointerToGaze(RECT, 900, 450)).toEqual({ x: 1, y: 1, inside: true });
  });

  it("flags positions outside the canvas", () => {
    const g = pointerToGaze(RECT, 99, 250);
    expect(g.inside).toBe(false);
    expect(g.x).toBe(0); // clamped
  });

  it("uses whatever geometry it is handed (resize mid-session)", () => {
    const resized = { left: 0, top: 0, width: 400, height: 200 };
    expect(pointerToGaze(resized, 200, 100)).toEqual({ x: 0.5, y: 0.5, inside: true });
    expect(pointerToGaze(resized, 200, 100)).not.toEqual(pointerToGaze(RECT, 200, 100));
  });

  it("degrades on zero-size canvases", () => {
    expect(pointerToGaze({ left: 0, top: 0, width: 0, height: 0 }, 10, 10).inside).toBe(false);
  });
});

describe("GazeSender", () => {
  it("emits at the tick cadence regardless of pump jitter", () => {
    const sent: number[] = [];
    const sender = new GazeSender((t) => sent.push(t), 60);
    sender.setPointer(0.3, 0.4, true);
    sender.pump(1000);
    expect(sent.length).toBe(1);
    sender.pump(1008); // < 1 tick later: nothing new
    expect(sent.length).toBe(1);
    sender.pump(1000 + 1000); // one second later: exactly 60 more
    expect(sent.length).toBe(61);
    const deltas = sent.slice(1).map((t, i) => t - sent[i]!);
    for (const d of deltas) expect(d).toBeCloseTo(1 / 60, 12);
  });

  it("carries the latest pointer state and validity", () => {
    const out: { x: number; valid: boolean }[] = [];
    const sender = new GazeSender((_t, x, _y, valid) => out.push({ x, valid }), 60);
    sender.setPointer(0.2, 0.2, true);
    sender.pump(0);
    sender.setPointer(0.8, 0.2, false); // pointer left the canvas
    sender.pump(50);
    expect(out[0]).toEqual({ x: 0.2, valid: true });
    expect(out.at(-1)).toEqual({ x: 0.8, valid: false });
  });
});
