/**
 * TCP client for the engine: HELLO handshake, ordered FRAME stream out,
 * ordered PREDICTION/CYCLE stream in.
 */

import * as net from "node:net";

import {
  CycleMsg,
  ErrorMsg,
  Message,
  MessageReader,
  PredictionMsg,
  PROTOCOL_VERSION,
  encodeFrame,
  encodeHello,
} from "./protocol.js";
import { FRAME_DIM } from "./landmarks.js";

export interface EngineEvents {
  onPrediction?: (msg: PredictionMsg) => void;
  onCycle?: (msg: CycleMsg) => void;
  onError?: (msg: ErrorMsg) => void;
}

export class EngineClient {
  private socket: net.Socket | null = null;
  private reader = new MessageReader();
  private lastTimestamp = -1;
  private closed: Promise<void> = Promise.resolve();
  classNames: string[] = [];

  constructor(private readonly events: EngineEvents = {}) {}

  async connect(host: string, port: number, dim: number = FRAME_DIM): Promise<string[]> {
    const socket = net.createConnection({ host, port });
    this.socket = socket;
    await new Promise<void>((resolve, reject) => {
      socket.once("connect", resolve);
      socket.once("error", reject);
    });

    const ackPromise = new Promise<string[]>((resolve, reject) => {
      const onMessage = (msg: Message) => {
        if (msg.type === "helloAck") {
          resolve(msg.classNames);
        } else if (msg.type === "error") {
          reject(new Error(`engine rejected handshake: ${msg.message}`));
        }
      };
      this.pendingHandshake = onMessage;
    });

    this.closed = new Promise<void>((resolve) => socket.once("close", resolve));
    socket.on("data", (data) => this.handleData(data));
    socket.write(encodeHello(PROTOCOL_VERSION, dim));
    this.classNames = await ackPromise;
    this.pendingHandshake = null;
    return this.classNames;
  }

  private pendingHandshake: ((msg: Message) => void) | null = null;

  private handleData(data: Buffer): void {
    for (const msg of this.reader.feed(data)) {
      if (this.pendingHandshake) {
        this.pendingHandshake(msg);
        if (msg.type === "helloAck") continue;
      }
      switch (msg.type) {
        case "prediction":
          this.events.onPrediction?.(msg);
          break;
        case "cycle":
          this.events.onCycle?.(msg);
          break;
        case "error":
          this.events.onError?.(msg);
          break;
        default:
          break;
      }
    }
  }

  /** Timestamps must be strictly increasing; the UI never reorders frames. */
  sendFrame(timestampMs: number, values: Float32Array): void {
    if (!this.socket) throw new Error("not connected");
    if (timestampMs <= this.lastTimestamp) {
      throw new Error(
        `timestamp ${timestampMs} not greater than previous ${this.lastTimestamp}`,
      );
    }
    this.lastTimestamp = timestampMs;
    this.socket.write(encodeFrame(timestampMs, values));
  }

  /** Stop sending and wait for the engine to flush its replies. */
  async finish(): Promise<void> {
    if (!this.socket) return;
    this.socket.end();
    await this.closed;
    this.socket = null;
  }

  close(): void {
    this.socket?.destroy();
    this.socket = null;
  }
}
