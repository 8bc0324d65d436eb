// Pointer-as-gaze: normalize pointer positions against the current canvas
// geometry and emit GazeInput messages at the engine tick cadence.

export interface RectLike {
  left: number;
  top: number;
  width: number;
  height: number;
}

export interface PointerGaze {
  x: number;
  y: number;
  inside: boolean;
}

export function pointerToGaze(rect: RectLike, clientX: number, clientY: number): PointerGaze {
  if (rect.width <= 0 || rect.height <= 0) {
    return { x: 0, y: 0, inside: false };
  }
  const nx = (clientX - rect.left) / rect.width;
  const ny = (clientY - rect.top) / rect.height;
  const inside = nx >= 0 && nx <= 1 && ny >= 0 && ny <= 1;
  return { x: Math.min(1, Math.max(0, nx)), y: Math.min(1, Math.max(0, ny)), inside };
}

export type GazeSend = (t: number, x: number, y: number, valid: boolean) => void;

/**
 * Fixed-rate gaze pump. The host calls `pump(nowMs)` from any timer; the
 * sender converts elapsed wall time into the exact number of due ticks so
 * the outgoing message rate is hz regardless of timer jitter.
 */
export class GazeSender {
  private startMs: number | null = null;
  private sent = 0;
  private x = 0.5;
  private y = 0.5;
  private valid = false;

  constructor(private readonly send: GazeSend, readonly hz = 60) {}

  setPointer(x: number, y: number, valid: boolean): void {
    this.x = x;
    this.y = y;
    this.valid = valid;
  }

  pump(nowMs: number): number {
    if (this.startMs === null) {
      this.startMs = nowMs;
    }
    const due = Math.floor(((nowMs - this.startMs) / 1000) * this.hz) + 1;
    let emitted = 0;
    while (this.sent < due) {
      this.send(this.sent / this.hz, this.x, this.y, this.valid);
      this.sent += 1;
      emitted += 1;
    }
    return emitted;
  }
}
