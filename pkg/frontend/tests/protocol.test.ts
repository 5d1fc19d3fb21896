import { describe, expect, it } from "vitest";

import {
  Message,
  MessageReader,
  encodeFrame,
  encodeHello,
  encodeMessage,
} from "../src/protocol";

describe("wire protocol", () => {
  it("HELLO golden bytes match the engine's", () => {
    expect(encodeHello(1, 1662)).toEqual(Buffer.from("040000000101007e06", "hex"));
  });

  it("CYCLE golden bytes", () => {
    const msg: Message = {
      type: "cycle",
      eventCode: 0,
      stepIndex: 1,
      expectedClass: 0,
      observedClass: 0,
    };
    expect(encodeMessage(msg)).toEqual(Buffer.from("040000002100010000", "hex"));
  });

  it("ERROR golden bytes", () => {
    const raw = encodeMessage({ type: "error", code: 2, message: "bad" });
    expect(raw).toEqual(Buffer.concat([Buffer.from("050000007f0203", "hex"), Buffer.from("bad")]));
  });

  it("FRAME with 1662 values is 6663 bytes", () => {
    expect(encodeFrame(12345, new Float32Array(1662)).length).toBe(6663);
  });

  it("round-trips every message type", () => {
    const messages: Message[] = [
      { type: "hello", version: 1, dim: 1662 },
      { type: "helloAck", classNames: ["Pranamasana", "Svanasana"] },
      { type: "frame", timestampMs: 99, values: Float32Array.from([1.5, -2.25, 0]) },
      {
        type: "prediction",
        timestampMs: 1234,
        classIndex: 6,
        probabilities: Float32Array.from([0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 1]),
        stable: true,
      },
      { type: "cycle", eventCode: 2, stepIndex: 5, expectedClass: 4, observedClass: 1 },
      { type: "error", code: 3, message: "something went wrong" },
    ];
    for (const msg of messages) {
      const raw = encodeMessage(msg);
      const reader = new MessageReader();
      const decoded = reader.feed(raw);
      expect(decoded).toEqual([msg]);
      expect(encodeMessage(decoded[0])).toEqual(raw);
    }
  });

  it("handles fragmented streams", () => {
    const raw = Buffer.concat([
      encodeHello(1, 1662),
      encodeMessage({ type: "cycle", eventCode: 0, stepIndex: 1, expectedClass: 0, observedClass: 0 }),
    ]);
    const reader = new MessageReader();
    const out: Message[] = [];
    for (let i = 0; i < raw.length; i += 3) {
      out.push(...reader.feed(raw.subarray(i, i + 3)));
    }
    expect(out).toHaveLength(2);
    expect(out[0].type).toBe("hello");
    expect(out[1].type).toBe("cycle");
    expect(reader.pending).toBe(0);
  });
});
