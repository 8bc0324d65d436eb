// Web Audio alert playback: LowTone 440 Hz sine (150 ms), UrgentBeep 880 Hz
// square (100 ms), stereo-panned per event. Degrades silently to
// visual-only when audio is unavailable or locked.

import type { AudioEventBody } from "./protocol.js";

export interface ToneParams {
  frequencyHz: number;
  durationS: number;
  wave: OscillatorType;
}

export function toneParams(kind: AudioEventBody["kind"]): ToneParams {
  if (kind === "UrgentBeep") {
    return { frequencyHz: 880, durationS: 0.1, wave: "square" };
  }
  return { frequencyHz: 440, durationS: 0.15, wave: "sine" };
}

export function clampPan(pan: number): number {
  return Math.min(1, Math.max(-1, pan));
}

export class AlertPlayer {
  private ctx: AudioContext | null = null;
  private failed = false;

  /** Must be called from a user gesture; returns whether audio is usable. */
  unlock(): boolean {
    if (this.failed) return false;
    if (this.ctx) return true;
    try {
      const Ctor =
        (globalThis as { AudioContext?: typeof AudioContext }).AudioContext ??
        (globalThis as { webkitAudioContext?: typeof AudioContext }).webkitAudioContext;
      if (!Ctor) throw new Error("no AudioContext");
      this.ctx = new Ctor();
      void this.ctx.resume();
    } catch {
      this.failed = true;
      return false;
    }
    return true;
  }

  get available(): boolean {
    return this.ctx !== null && !this.failed;
  }

  play(event: AudioEventBody): boolean {
    if (!this.ctx) return false;
    try {
      const params = toneParams(event.kind);
      const osc = this.ctx.createOscillator();
      const gain = this.ctx.createGain();
      const pan = this.ctx.createStereoPanner();
      osc.type = params.wave;
      osc.frequency.value = event.frequency_hz || params.frequencyHz;
      pan.pan.value = clampPan(event.pan);
      const t0 = this.ctx.currentTime;
      const dur = event.duration_s || params.durationS;
      gain.gain.setValueAtTime(0.25, t0);
      gain.gain.exponentialRampToValueAtTime(0.001, t0 + dur);
      osc.connect(gain);
      gain.connect(pan);
      pan.connect(this.ctx.destination);
      osc.start(t0);
      osc.stop(t0 + dur);
      return true;
    } catch {
      return false;
    }
  }
}
