/**
 * Wiring: landmark provider -> engine client -> overlay, plus the dataset
 * recording mode (10-frame SNK1 sequences sliced at stride 10).
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { EngineClient } from "./client.js";
import { LandmarkProvider } from "./landmarks.js";
import {
  OverlayState,
  applyCycle,
  applyPrediction,
  initialOverlay,
  renderOverlay,
} from "./overlay.js";
import { CycleMsg, PredictionMsg } from "./protocol.js";
import { writeSnk } from "./snk.js";

export const SEQUENCE_FRAMES = 10;

// canonical asana order; recording labels must come from this list, and the
// engine's HELLO_ACK is expected to match it
export const CLASS_NAMES = [
  "Pranamasana",
  "Hasta Uttanasana",
  "Hasta Padasana",
  "Ashwa Sanchalanasana",
  "Dandasana",
  "Ashtanga Namaskara",
  "Bhujangasana",
  "Svanasana",
] as const;

export interface CaptureResult {
  predictions: PredictionMsg[];
  cycles: CycleMsg[];
  framesSent: number;
}

export interface CaptureOptions {
  render?: (lines: string[]) => void; // HUD sink; defaults to none
  now?: () => number;
}

/**
 * Stream every provider frame to the engine and fold replies into the
 * overlay. Resolves once the provider is exhausted and the engine has
 * flushed its replies.
 */
export async function captureLoop(
  provider: LandmarkProvider,
  host: string,
  port: number,
  options: CaptureOptions = {},
): Promise<CaptureResult> {
  const now = options.now ?? Date.now;
  const predictions: PredictionMsg[] = [];
  const cycles: CycleMsg[] = [];
  let overlay: OverlayState | null = null;

  const redraw = () => {
    if (overlay && options.render) options.render(renderOverlay(overlay, now()));
  };

  const client = new EngineClient({
    onPrediction: (msg) => {
      predictions.push(msg);
      if (overlay) overlay = applyPrediction(overlay, msg, now());
      redraw();
    },
    onCycle: (msg) => {
      cycles.push(msg);
      if (overlay) overlay = applyCycle(overlay, msg);
      redraw();
    },
    onError: (msg) => {
      throw new Error(`engine error ${msg.code}: ${msg.message}`);
    },
  });

  const classNames = await client.connect(host, port);
  overlay = initialOverlay(classNames);
  redraw();

  let framesSent = 0;
  let lastTimestamp = -1;
  for await (const frame of provider.frames()) {
    // keep timestamps strictly increasing even if the provider stutters
    const timestampMs = frame.timestampMs > lastTimestamp ? frame.timestampMs : lastTimestamp + 1;
    lastTimestamp = timestampMs;
    client.sendFrame(timestampMs, frame.values);
    framesSent++;
  }
  await client.finish();
  redraw();
  return { predictions, cycles, framesSent };
}

export interface RecordOptions {
  countdownSeconds?: number;
  render?: (lines: string[]) => void;
  fps?: number;
}

/**
 * Capture `count` sequences of exactly 10 consecutive frames for one class,
 * written as SNK1 files the trainer loads directly.
 */
export async function recordSequences(
  outDir: string,
  className: string,
  count: number,
  provider: LandmarkProvider,
  options: RecordOptions = {},
): Promise<string[]> {
  const labelIndex = CLASS_NAMES.indexOf(className as (typeof CLASS_NAMES)[number]);
  if (labelIndex < 0) throw new Error(`unknown class name ${JSON.stringify(className)}`);
  const fps = options.fps ?? 60;
  const classDir = path.join(outDir, className);
  fs.mkdirSync(classDir, { recursive: true });

  const written: string[] = [];
  let buffer: Float32Array[] = [];
  for await (const frame of provider.frames()) {
    if (written.length >= count) break;
    if (buffer.length === 0 && options.render) {
      options.render([`recording ${className} ${written.length + 1}/${count}`]);
    }
    buffer.push(frame.values);
    if (buffer.length === SEQUENCE_FRAMES) {
      const file = path.join(classDir, `seq_${String(written.length).padStart(4, "0")}.snk`);
      writeSnk(file, { frames: buffer, labelIndex, fps });
      written.push(file);
      buffer = []; // stride 10: disjoint sequences, same as training data
    }
  }
  if (written.length < count) {
    throw new Error(`provider ended after ${written.length}/${count} sequences`);
  }
  return written;
}
