/**
 * The engine's wire protocol (client side).
 *
 * Framing: u32 payload_length | u8 message_type | payload, little-endian;
 * payload_length counts payload bytes only.
 */

export const PROTOCOL_VERSION = 1;

export const HELLO = 0x01;
export const HELLO_ACK = 0x02;
export const FRAME = 0x10;
export const PREDICTION = 0x20;
export const CYCLE = 0x21;
export const ERROR = 0x7f;

export const STABLE_FLAG = 0x01;

export const EVENT_ADVANCE = 0;
export const EVENT_HOLD = 1;
export const EVENT_OUT_OF_ORDER = 2;
export const EVENT_CYCLE_COMPLETE = 3;

export interface HelloMsg {
  type: "hello";
  version: number;
  dim: number;
}

export interface HelloAckMsg {
  type: "helloAck";
  classNames: string[];
}

export interface FrameMsg {
  type: "frame";
  timestampMs: number;
  values: Float32Array;
}

export interface PredictionMsg {
  type: "prediction";
  timestampMs: number;
  classIndex: number;
  probabilities: Float32Array;
  stable: boolean;
}

export interface CycleMsg {
  type: "cycle";
  eventCode: number;
  stepIndex: number;
  expectedClass: number;
  observedClass: number;
}

export interface ErrorMsg {
  type: "error";
  code: number;
  message: string;
}

export type Message =
  | HelloMsg
  | HelloAckMsg
  | FrameMsg
  | PredictionMsg
  | CycleMsg
  | ErrorMsg;

function frame(msgType: number, payload: Buffer): Buffer {
  const header = Buffer.alloc(5);
  header.writeUInt32LE(payload.length, 0);
  header.writeUInt8(msgType, 4);
  return Buffer.concat([header, payload]);
}

export function encodeHello(version: number, dim: number): Buffer {
  const payload = Buffer.alloc(4);
  payload.writeUInt16LE(version, 0);
  payload.writeUInt16LE(dim, 2);
  return frame(HELLO, payload);
}

export function encodeFrame(timestampMs: number, values: Float32Array): Buffer {
  const payload = Buffer.alloc(10 + values.length * 4);
  payload.writeBigUInt64LE(BigInt(timestampMs), 0);
  payload.writeUInt16LE(values.length, 8);
  for (let i = 0; i < values.length; i++) {
    payload.writeFloatLE(values[i], 10 + i * 4);
  }
  return frame(FRAME, payload);
}

export function encodeMessage(msg: Message): Buffer {
  switch (msg.type) {
    case "hello":
      return encodeHello(msg.version, msg.dim);
    case "frame":
      return encodeFrame(msg.timestampMs, msg.values);
    case "helloAck": {
      const parts: Buffer[] = [Buffer.from([msg.classNames.length])];
      for (const name of msg.classNames) {
        const raw = Buffer.from(name, "utf-8");
        parts.push(Buffer.from([raw.length]), raw);
      }
      return frame(HELLO_ACK, Buffer.concat(parts));
    }
    case "prediction": {
      const payload = Buffer.alloc(9 + msg.probabilities.length * 4 + 1);
      payload.writeBigUInt64LE(BigInt(msg.timestampMs), 0);
      payload.writeUInt8(msg.classIndex, 8);
      for (let i = 0; i < msg.probabilities.length; i++) {
        payload.writeFloatLE(msg.probabilities[i], 9 + i * 4);
      }
      payload.writeUInt8(msg.stable ? STABLE_FLAG : 0, payload.length - 1);
      return frame(PREDICTION, payload);
    }
    case "cycle":
      return frame(
        CYCLE,
        Buffer.from([msg.eventCode, msg.stepIndex, msg.expectedClass, msg.observedClass]),
      );
    case "error": {
      const raw = Buffer.from(msg.message, "utf-8");
      return frame(ERROR, Buffer.concat([Buffer.from([msg.code, raw.length]), raw]));
    }
  }
}

function decodePayload(msgType: number, payload: Buffer): Message {
  switch (msgType) {
    case HELLO:
      return { type: "hello", version: payload.readUInt16LE(0), dim: payload.readUInt16LE(2) };
    case HELLO_ACK: {
      const count = payload.readUInt8(0);
      const names: string[] = [];
      let pos = 1;
      for (let i = 0; i < count; i++) {
        const len = payload.readUInt8(pos);
        pos += 1;
        names.push(payload.subarray(pos, pos + len).toString("utf-8"));
        pos += len;
      }
      if (pos !== payload.length) throw new Error("trailing bytes in HELLO_ACK");
      return { type: "helloAck", classNames: names };
    }
    case FRAME: {
      const timestampMs = Number(payload.readBigUInt64LE(0));
      const dim = payload.readUInt16LE(8);
      if (payload.length !== 10 + dim * 4) throw new Error("FRAME size mismatch");
      const values = new Float32Array(dim);
      for (let i = 0; i < dim; i++) values[i] = payload.readFloatLE(10 + i * 4);
      return { type: "frame", timestampMs, values };
    }
    case PREDICTION: {
      const timestampMs = Number(payload.readBigUInt64LE(0));
      const classIndex = payload.readUInt8(8);
      const count = (payload.length - 10) / 4;
      const probabilities = new Float32Array(count);
      for (let i = 0; i < count; i++) probabilities[i] = payload.readFloatLE(9 + i * 4);
      const flags = payload.readUInt8(payload.length - 1);
      return {
        type: "prediction",
        timestampMs,
        classIndex,
        probabilities,
        stable: (flags & STABLE_FLAG) !== 0,
      };
    }
    case CYCLE:
      return {
        type: "cycle",
        eventCode: payload.readUInt8(0),
        stepIndex: payload.readUInt8(1),
        expectedClass: payload.readUInt8(2),
        observedClass: payload.readUInt8(3),
      };
    case ERROR: {
      const code = payload.readUInt8(0);
      const len = payload.readUInt8(1);
      return { type: "error", code, message: payload.subarray(2, 2 + len).toString("utf-8") };
    }
    default:
      throw new Error(`unknown message type 0x${msgType.toString(16)}`);
  }
}

/** Incremental decoder over a fragmented byte stream. */
export class MessageReader {
  private buf: Buffer = Buffer.alloc(0);

  feed(data: Buffer): Message[] {
    this.buf = this.buf.length ? Buffer.concat([this.buf, data]) : data;
    const out: Message[] = [];
    for (;;) {
      if (this.buf.length < 5) return out;
      const length = this.buf.readUInt32LE(0);
      if (this.buf.length < 5 + length) return out;
      const msgType = this.buf.readUInt8(4);
      const payload = this.buf.subarray(5, 5 + length);
      out.push(decodePayload(msgType, payload));
      this.buf = this.buf.subarray(5 + length);
    }
  }

  get pending(): number {
    return this.buf.length;
  }
}
