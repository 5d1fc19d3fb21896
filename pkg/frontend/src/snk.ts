/**
 * SNK1 sequence files, byte-compatible with the engine's dataset format.
 *
 * Layout (little-endian): "SNK1" | u16 version=1 | u8 label | f32 fps |
 * u32 frame_count | u16 dim | frame_count*dim f32.
 */

import * as fs from "node:fs";

export const SNK_MAGIC = "SNK1";
export const SNK_VERSION = 1;
const HEADER_SIZE = 17;

export interface SnkSequence {
  frames: Float32Array[]; // frame_count arrays of dim values
  labelIndex: number;
  fps: number;
}

export function encodeSnk(seq: SnkSequence): Buffer {
  const dim = seq.frames[0]?.length ?? 0;
  const buf = Buffer.alloc(HEADER_SIZE + seq.frames.length * dim * 4);
  buf.write(SNK_MAGIC, 0, "ascii");
  buf.writeUInt16LE(SNK_VERSION, 4);
  buf.writeUInt8(seq.labelIndex, 6);
  buf.writeFloatLE(seq.fps, 7);
  buf.writeUInt32LE(seq.frames.length, 11);
  buf.writeUInt16LE(dim, 15);
  let pos = HEADER_SIZE;
  for (const frame of seq.frames) {
    if (frame.length !== dim) throw new Error("ragged frame dimensions");
    for (let i = 0; i < dim; i++) {
      buf.writeFloatLE(frame[i], pos);
      pos += 4;
    }
  }
  return buf;
}

export function decodeSnk(raw: Buffer): SnkSequence {
  if (raw.length < HEADER_SIZE) throw new Error("file shorter than header");
  if (raw.subarray(0, 4).toString("ascii") !== SNK_MAGIC) {
    throw new Error(`bad magic ${raw.subarray(0, 4).toString("ascii")}`);
  }
  const version = raw.readUInt16LE(4);
  if (version !== SNK_VERSION) throw new Error(`unsupported version ${version}`);
  const labelIndex = raw.readUInt8(6);
  const fps = raw.readFloatLE(7);
  const frameCount = raw.readUInt32LE(11);
  const dim = raw.readUInt16LE(15);
  if (raw.length !== HEADER_SIZE + frameCount * dim * 4) {
    throw new Error(
      `payload is ${raw.length - HEADER_SIZE} bytes, header declares ${frameCount * dim * 4}`,
    );
  }
  const frames: Float32Array[] = [];
  let pos = HEADER_SIZE;
  for (let f = 0; f < frameCount; f++) {
    const frame = new Float32Array(dim);
    for (let i = 0; i < dim; i++) {
      frame[i] = raw.readFloatLE(pos);
      pos += 4;
    }
    frames.push(frame);
  }
  return { frames, labelIndex, fps };
}

export function writeSnk(path: string, seq: SnkSequence): void {
  fs.writeFileSync(path, encodeSnk(seq));
}

export function readSnk(path: string): SnkSequence {
  return decodeSnk(fs.readFileSync(path));
}
