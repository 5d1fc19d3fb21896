/**
 * Holistic landmark layout shared with the engine: pose (33 × x,y,z,visibility),
 * face (468 × x,y,z), left hand (21 × x,y,z), right hand (21 × x,y,z),
 * flattened to 1662 values. Missing blocks are all-zero.
 */

export const POSE_LANDMARKS = 33;
export const FACE_LANDMARKS = 468;
export const HAND_LANDMARKS = 21;

export const POSE_OFFSET = 0;
export const FACE_OFFSET = POSE_LANDMARKS * 4; // 132
export const LEFT_HAND_OFFSET = FACE_OFFSET + FACE_LANDMARKS * 3; // 1536
export const RIGHT_HAND_OFFSET = LEFT_HAND_OFFSET + HAND_LANDMARKS * 3; // 1599
export const FRAME_DIM = RIGHT_HAND_OFFSET + HAND_LANDMARKS * 3; // 1662

export interface Landmark {
  x: number;
  y: number;
  z: number;
  visibility?: number;
}

/** Mediapipe-holistic style per-frame results. Any block may be missing. */
export interface HolisticResults {
  poseLandmarks?: Landmark[];
  faceLandmarks?: Landmark[];
  leftHandLandmarks?: Landmark[];
  rightHandLandmarks?: Landmark[];
}

function fillBlock(
  out: Float32Array,
  offset: number,
  landmarks: Landmark[] | undefined,
  count: number,
  withVisibility: boolean,
  name: string,
): void {
  if (!landmarks) return;
  if (landmarks.length !== count) {
    throw new Error(`${name} block must have ${count} landmarks, got ${landmarks.length}`);
  }
  const stride = withVisibility ? 4 : 3;
  for (let i = 0; i < count; i++) {
    const lm = landmarks[i];
    const base = offset + i * stride;
    if (!Number.isFinite(lm.x) || !Number.isFinite(lm.y) || !Number.isFinite(lm.z)) {
      throw new Error(`${name} landmark ${i} has non-finite coordinates`);
    }
    out[base] = Math.fround(lm.x);
    out[base + 1] = Math.fround(lm.y);
    out[base + 2] = Math.fround(lm.z);
    if (withVisibility) out[base + 3] = Math.fround(lm.visibility ?? 0);
  }
}

/** Same assembly rule as the engine's frame builder, element for element. */
export function assembleFrameValues(results: HolisticResults): Float32Array {
  const values = new Float32Array(FRAME_DIM);
  fillBlock(values, POSE_OFFSET, results.poseLandmarks, POSE_LANDMARKS, true, "pose");
  fillBlock(values, FACE_OFFSET, results.faceLandmarks, FACE_LANDMARKS, false, "face");
  fillBlock(values, LEFT_HAND_OFFSET, results.leftHandLandmarks, HAND_LANDMARKS, false, "left hand");
  fillBlock(values, RIGHT_HAND_OFFSET, results.rightHandLandmarks, HAND_LANDMARKS, false, "right hand");
  return values;
}

export interface LandmarkFrame {
  timestampMs: number;
  values: Float32Array;
}

/**
 * Pluggable source of landmark frames: a live detector in the browser, or a
 * recorded fixture for headless runs.
 */
export interface LandmarkProvider {
  frames(): AsyncIterable<LandmarkFrame>;
}
