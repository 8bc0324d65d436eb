import { describe, expect, it } from "vitest";

import { gazeInput, parseServerMessage, sessionEndRequest } from "../src/protocol.js";

describe("parseServerMessage", () => {
  it("accepts every documented server kind", () => {
    for (const kind of ["SessionStart", "StateSnapshot", "CueEventMsg",
                        "AudioEventMsg", "SessionEnd", "Error"]) {
      const msg = parseServerMessage(JSON.stringify({ kind, seq: 1 }));
      expect(msg.kind).toBe(kind);
    }
  });

  it("rejects unknown kinds and non-JSON", () => {
    expect(() => parseServerMessage(JSON.stringify({ kind: "Nope" }))).toThrow(/unknown/);
    expect(() => parseServerMessage("{oops")).toThrow(/not JSON/);
  });
});

describe("outbound messages", () => {
  it("encodes GazeInput fields exactly", () => {
    const doc = JSON.parse(gazeInput(3, 0.05, 0.25, 0.75, true));
    expect(doc).toEqual({ kind: "GazeInput", seq: 3, t: 0.05, x: 0.25, y: 0.75, valid: true });
  });

  it("encodes the end request", () => {
    expect(JSON.parse(sessionEndRequest(9))).toEqual({ kind: "SessionEnd", seq: 9 });
  });
});
