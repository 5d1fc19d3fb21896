import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { readSnk, writeSnk } from "../src/snk";
import { python } from "./helpers";

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "snk-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe("SNK1 files", () => {
  it("round-trips bit-exactly", () => {
    const frames = Array.from({ length: 10 }, (_, t) =>
      Float32Array.from({ length: 1662 }, (_, i) => Math.fround(Math.sin(t + i * 0.01))),
    );
    const file = path.join(tmp, "roundtrip.snk");
    writeSnk(file, { frames, labelIndex: 3, fps: 60 });
    const loaded = readSnk(file);
    expect(loaded.labelIndex).toBe(3);
    expect(loaded.fps).toBe(60);
    expect(loaded.frames).toHaveLength(10);
    for (let t = 0; t < 10; t++) expect(loaded.frames[t]).toEqual(frames[t]);
  });

  it("rejects bad magic and truncation", () => {
    const file = path.join(tmp, "bad.snk");
    writeSnk(file, { frames: [new Float32Array(4)], labelIndex: 0, fps: 30 });
    const raw = fs.readFileSync(file);
    raw.write("XXXX", 0, "ascii");
    fs.writeFileSync(file, raw);
    expect(() => readSnk(file)).toThrow(/magic/);

    const truncated = path.join(tmp, "short.snk");
    writeSnk(truncated, { frames: [new Float32Array(4)], labelIndex: 0, fps: 30 });
    fs.writeFileSync(truncated, fs.readFileSync(truncated).subarray(0, 20));
    expect(() => readSnk(truncated)).toThrow(/payload/);
  });

  it("is readable by the engine's loader", () => {
    const frames = Array.from({ length: 10 }, (_, t) =>
      Float32Array.from({ length: 1662 }, (_, i) => Math.fround((t * 1662 + i) * 1e-4)),
    );
    const file = path.join(tmp, "cross.snk");
    writeSnk(file, { frames, labelIndex: 6, fps: 60 });
    const out = python(`
import json
from suryanet.dataset import read_sequence
frames, label, fps = read_sequence(${JSON.stringify(file)})
print(json.dumps({
    "shape": list(frames.shape),
    "label": label.index,
    "fps": fps,
    "probe": [float(frames[2][5]), float(frames[9][1661])],
}))
`);
    const parsed = JSON.parse(out);
    expect(parsed.shape).toEqual([10, 1662]);
    expect(parsed.label).toBe(6);
    expect(parsed.fps).toBe(60);
    expect(parsed.probe[0]).toBeCloseTo(frames[2][5], 10);
    expect(parsed.probe[1]).toBeCloseTo(frames[9][1661], 10);
  });

  it("reads files the engine wrote", () => {
    const file = path.join(tmp, "from-python.snk");
    python(`
import numpy as np
from suryanet.dataset import write_sequence
from suryanet.labels import ClassLabel
rng = np.random.default_rng(5)
write_sequence(${JSON.stringify(file)}, rng.normal(0, 1, (10, 1662)).astype(np.float32),
               ClassLabel.from_index(2), 30.0)
`);
    const seq = readSnk(file);
    expect(seq.labelIndex).toBe(2);
    expect(seq.fps).toBe(30);
    expect(seq.frames).toHaveLength(10);
    expect(seq.frames[0]).toHaveLength(1662);
  });
});
