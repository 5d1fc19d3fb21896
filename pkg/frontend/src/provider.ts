/**
 * Landmark providers. The fixture provider replays a recorded SNK1 file so
 * the whole client runs headless; a live mediapipe-holistic detector slots
 * into the same interface via `assembleFrameValues`.
 */

import { LandmarkFrame, LandmarkProvider } from "./landmarks.js";
import { readSnk } from "./snk.js";

export class FixtureProvider implements LandmarkProvider {
  private readonly values: Float32Array[];
  readonly fps: number;

  constructor(fixturePath: string, private readonly realtime = false) {
    const seq = readSnk(fixturePath);
    this.values = seq.frames;
    this.fps = seq.fps;
  }

  async *frames(): AsyncIterable<LandmarkFrame> {
    const periodMs = 1000 / this.fps;
    for (let t = 0; t < this.values.length; t++) {
      if (this.realtime && t > 0) {
        await new Promise((resolve) => setTimeout(resolve, periodMs));
      }
      yield { timestampMs: Math.round(t * periodMs), values: this.values[t] };
    }
  }
}
