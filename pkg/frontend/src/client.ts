// Session client over any WebSocket-shaped object (browser WebSocket in the
// cockpit, the `ws` package in node tests).

import {
  gazeInput,
  parseServerMessage,
  sessionEndRequest,
  type ServerMessage,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SessionClientOptions {
  seed?: number;
  config?: Record<string, unknown>;
  socketFactory?: SocketFactory;
}

export function sessionUrl(baseUrl: string, sceneId: string, opts: SessionClientOptions = {}): string {
  const base = baseUrl.replace(/^http/, "ws").replace(/\/$/, "");
  const params = new URLSearchParams({ scene: sceneId });
  if (opts.seed !== undefined) params.set("seed", String(opts.seed));
  if (opts.config) params.set("config", JSON.stringify(opts.config));
  return `${base}/session?${params.toString()}`;
}

export class SessionClient {
  onMessage: ((msg: ServerMessage) => void) | null = null;
  onOpen: (() => void) | null = null;
  onClose: (() => void) | null = null;
  onProtocolError: ((err: Error) => void) | null = null;

  private socket: SocketLike | null = null;
  private clientSeq = 0;
  private lastServerSeq = 0;
  private ended = false;

  constructor(
    private readonly baseUrl: string,
    private readonly sceneId: string,
    private readonly opts: SessionClientOptions = {},
  ) {}

  connect(): void {
    const factory =
      this.opts.socketFactory ??
      ((url: string) => new WebSocket(url) as unknown as SocketLike);
    const socket = factory(sessionUrl(this.baseUrl, this.sceneId, this.opts));
    this.socket = socket;
    socket.onopen = () => this.onOpen?.();
    socket.onclose = () => this.onClose?.();
    socket.onmessage = (ev) => {
      let msg: ServerMessage;
      try {
        msg = parseServerMessage(String(ev.data));
      } catch (err) {
        this.onProtocolError?.(err as Error);
        return;
      }
      if (msg.seq <= this.lastServerSeq) {
        this.onProtocolError?.(new Error(`server seq went ${this.lastServerSeq} -> ${msg.seq}`));
        return;
      }
      this.lastServerSeq = msg.seq;
      this.onMessage?.(msg);
    };
  }

  sendGaze(t: number, x: number, y: number, valid: boolean): void {
    if (!this.socket || this.ended) return;
    this.clientSeq += 1;
    try {
      this.socket.send(gazeInput(this.clientSeq, t, x, y, valid));
    } catch {
      // socket already closing; the server persists what it consumed
    }
  }

  requestEnd(): void {
    if (!this.socket || this.ended) return;
    this.ended = true;
    this.clientSeq += 1;
    try {
      this.socket.send(sessionEndRequest(this.clientSeq));
    } catch {
      // already closed
    }
  }

  close(): void {
    this.socket?.close();
  }
}
