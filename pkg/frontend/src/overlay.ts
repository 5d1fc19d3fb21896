/**
 * On-screen state for the practitioner: current asana + confidence bar,
 * stability indicator, cycle progress, and correction hints. Rendered as
 * text lines so it works on a terminal HUD and is trivially testable;
 * a canvas renderer can draw the same OverlayState.
 */

import {
  CycleMsg,
  EVENT_CYCLE_COMPLETE,
  EVENT_OUT_OF_ORDER,
  PredictionMsg,
} from "./protocol.js";

export const STALE_AFTER_MS = 2000;
export const CYCLE_LENGTH = 12;

export interface OverlayState {
  classNames: string[]; // from HELLO_ACK; never display anything else
  lastPrediction: PredictionMsg | null;
  lastPredictionWallMs: number; // wall-clock arrival time
  lastCycle: CycleMsg | null;
  fpsEstimate: number;
  recording: boolean;
  countdown: number | null; // seconds until the next recorded sequence
}

export function initialOverlay(classNames: string[]): OverlayState {
  return {
    classNames,
    lastPrediction: null,
    lastPredictionWallMs: 0,
    lastCycle: null,
    fpsEstimate: 0,
    recording: false,
    countdown: null,
  };
}

function probabilityBar(p: number, width = 10): string {
  const filled = Math.round(p * width);
  return "#".repeat(filled) + ".".repeat(width - filled);
}

export function renderOverlay(state: OverlayState, nowMs: number): string[] {
  const lines: string[] = [];
  const prediction = state.lastPrediction;
  if (!prediction) {
    lines.push("collecting frames...");
  } else {
    const name = state.classNames[prediction.classIndex] ?? `class ${prediction.classIndex}`;
    const p = prediction.probabilities[prediction.classIndex];
    const stale = nowMs - state.lastPredictionWallMs > STALE_AFTER_MS;
    const marker = prediction.stable ? "[stable]" : "";
    const staleness = stale ? " (stale)" : "";
    lines.push(`${name} ${p.toFixed(2)} ${probabilityBar(p)} ${marker}${staleness}`.trimEnd());
  }

  const cycle = state.lastCycle;
  if (cycle) {
    const next = state.classNames[cycle.expectedClass] ?? `class ${cycle.expectedClass}`;
    if (cycle.eventCode === EVENT_OUT_OF_ORDER) {
      const observed = state.classNames[cycle.observedClass] ?? `class ${cycle.observedClass}`;
      lines.push(`!! expected ${next}, saw ${observed}`);
    } else if (cycle.eventCode === EVENT_CYCLE_COMPLETE) {
      lines.push("cycle complete");
    }
    lines.push(`step ${cycle.stepIndex} / ${CYCLE_LENGTH}, next: ${nextExpectedName(state)}`);
  }

  if (state.recording) {
    lines.push(state.countdown !== null ? `recording in ${state.countdown}...` : "recording");
  }
  if (state.fpsEstimate > 0) lines.push(`${state.fpsEstimate.toFixed(1)} fps`);
  return lines;
}

function nextExpectedName(state: OverlayState): string {
  const cycle = state.lastCycle;
  if (!cycle) return "?";
  return state.classNames[cycle.expectedClass] ?? `class ${cycle.expectedClass}`;
}

export function applyPrediction(
  state: OverlayState,
  msg: PredictionMsg,
  wallMs: number,
): OverlayState {
  return { ...state, lastPrediction: msg, lastPredictionWallMs: wallMs };
}

export function applyCycle(state: OverlayState, msg: CycleMsg): OverlayState {
  return { ...state, lastCycle: msg };
}
