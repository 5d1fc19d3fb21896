"""Per-frame holistic landmark vectors and the sliding window.

A frame is a fixed 1662-value layout: 33 pose landmarks with
(x, y, z, visibility), 468 face landmarks (x, y, z), then 21 landmarks
per hand (x, y, z). A block whose detector produced nothing is all
zeros, never partially filled.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import BlockShapeError, InvalidValueError, ShapeError

POSE_LANDMARKS = 33
FACE_LANDMARKS = 468
HAND_LANDMARKS = 21

POSE_OFFSET = 0
FACE_OFFSET = POSE_LANDMARKS * 4          # 132
LEFT_HAND_OFFSET = FACE_OFFSET + FACE_LANDMARKS * 3   # 1536
RIGHT_HAND_OFFSET = LEFT_HAND_OFFSET + HAND_LANDMARKS * 3  # 1599
FRAME_DIM = RIGHT_HAND_OFFSET + HAND_LANDMARKS * 3    # 1662

WINDOW_SIZE = 10


@dataclass(frozen=True)
class KeypointFrame:
    timestamp_ms: int
    values: np.ndarray  # (1662,) float32

    def __post_init__(self):
        v = self.values
        if v.shape != (FRAME_DIM,):
            raise ShapeError(f"frame must have {FRAME_DIM} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidValueError("frame contains non-finite values")


def _flatten_block(block, count: int, coords: int, name: str) -> np.ndarray:
    arr = np.asarray(block, dtype=np.float32)
    if arr.shape != (count, coords):
        raise BlockShapeError(
            f"{name} block must have shape ({count}, {coords}), got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidValueError(f"{name} block contains non-finite coordinates")
    return arr.reshape(-1)


def assemble_frame(pose=None, face=None, left_hand=None, right_hand=None,
                   timestamp_ms: int = 0) -> KeypointFrame:
    """Flatten present landmark blocks into the fixed layout, zero-filling
    absent ones."""
    values = np.zeros(FRAME_DIM, dtype=np.float32)
    if pose is not None:
        values[POSE_OFFSET:FACE_OFFSET] = _flatten_block(pose, POSE_LANDMARKS, 4, "pose")
    if face is not None:
        values[FACE_OFFSET:LEFT_HAND_OFFSET] = _flatten_block(face, FACE_LANDMARKS, 3, "face")
    if left_hand is not None:
        values[LEFT_HAND_OFFSET:RIGHT_HAND_OFFSET] = _flatten_block(
            left_hand, HAND_LANDMARKS, 3, "left_hand")
    if right_hand is not None:
        values[RIGHT_HAND_OFFSET:FRAME_DIM] = _flatten_block(
            right_hand, HAND_LANDMARKS, 3, "right_hand")
    return KeypointFrame(timestamp_ms=timestamp_ms, values=values)


class SequenceWindow:
    """FIFO of the most recent WINDOW_SIZE frames, oldest first."""

    def __init__(self, capacity: int = WINDOW_SIZE):
        self.capacity = capacity
        self._frames: deque[KeypointFrame] = deque(maxlen=capacity)

    def push(self, frame: KeypointFrame) -> "SequenceWindow":
        self._frames.append(frame)
        return self

    def __len__(self) -> int:
        return len(self._frames)

    @property
    def ready(self) -> bool:
        return len(self._frames) == self.capacity

    @property
    def frames(self) -> list[KeypointFrame]:
        return list(self._frames)

    def as_array(self) -> np.ndarray:
        """Stack to a (length, 1662) float32 array."""
        return np.stack([f.values for f in self._frames]).astype(np.float32, copy=False)


def window_push(window: SequenceWindow, frame: KeypointFrame) -> SequenceWindow:
    return window.push(frame)
