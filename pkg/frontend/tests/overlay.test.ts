import { describe, expect, it } from "vitest";

import {
  applyCycle,
  applyPrediction,
  initialOverlay,
  renderOverlay,
  STALE_AFTER_MS,
} from "../src/overlay";
import { EVENT_OUT_OF_ORDER, PredictionMsg } from "../src/protocol";

const CLASSES = [
  "Pranamasana",
  "Hasta Uttanasana",
  "Hasta Padasana",
  "Ashwa Sanchalanasana",
  "Dandasana",
  "Ashtanga Namaskara",
  "Bhujangasana",
  "Svanasana",
];

function prediction(classIndex: number, p: number, stable: boolean): PredictionMsg {
  const probabilities = new Float32Array(8);
  probabilities[classIndex] = p;
  return { type: "prediction", timestampMs: 1000, classIndex, probabilities, stable };
}

describe("overlay", () => {
  it("shows a placeholder before the first prediction", () => {
    const lines = renderOverlay(initialOverlay(CLASSES), 0);
    expect(lines[0]).toMatch(/collecting frames/);
  });

  it("shows class, confidence and stability", () => {
    const state = applyPrediction(initialOverlay(CLASSES), prediction(6, 0.93, true), 1000);
    const lines = renderOverlay(state, 1500);
    expect(lines[0]).toContain("Bhujangasana 0.93");
    expect(lines[0]).toContain("[stable]");
    expect(lines[0]).not.toContain("stale");
  });

  it("greys out stale predictions", () => {
    const state = applyPrediction(initialOverlay(CLASSES), prediction(0, 0.8, false), 1000);
    const lines = renderOverlay(state, 1000 + STALE_AFTER_MS + 1);
    expect(lines[0]).toContain("(stale)");
  });

  it("names both classes on an out-of-order hint", () => {
    let state = applyPrediction(initialOverlay(CLASSES), prediction(7, 0.9, true), 0);
    state = applyCycle(state, {
      type: "cycle",
      eventCode: EVENT_OUT_OF_ORDER,
      stepIndex: 0,
      expectedClass: 0,
      observedClass: 7,
    });
    const lines = renderOverlay(state, 0);
    const hint = lines.find((l) => l.startsWith("!!"));
    expect(hint).toContain("Pranamasana");
    expect(hint).toContain("Svanasana");
  });

  it("never shows a name outside the handshake list", () => {
    const state = applyPrediction(initialOverlay(["OnlyClass"]), prediction(6, 0.9, false), 0);
    const lines = renderOverlay(state, 0);
    expect(lines[0]).toContain("class 6"); // fallback, not an invented name
  });
});
