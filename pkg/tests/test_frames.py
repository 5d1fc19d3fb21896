import numpy as np
import pytest

from suryanet.errors import BlockShapeError, InvalidValueError
from suryanet.frames import (FACE_OFFSET, FRAME_DIM, LEFT_HAND_OFFSET,
                             RIGHT_HAND_OFFSET, SequenceWindow, assemble_frame,
                             window_push)


def test_block_offsets():
    assert (0, FACE_OFFSET, LEFT_HAND_OFFSET, RIGHT_HAND_OFFSET) == (0, 132, 1536, 1599)
    assert FRAME_DIM == 1662
    assert 132 + 1404 + 63 + 63 == 1662


def test_all_blocks_absent_gives_zeros():
    frame = assemble_frame(timestamp_ms=5)
    assert frame.values.shape == (1662,)
    assert not frame.values.any()
    assert frame.timestamp_ms == 5


def test_pose_only_layout():
    pose = np.ones((33, 4))
    frame = assemble_frame(pose=pose)
    assert np.all(frame.values[:132] == 1.0)
    assert not frame.values[132:].any()


def test_each_block_lands_at_its_offset():
    frame = assemble_frame(face=np.full((468, 3), 2.0),
                           left_hand=np.full((21, 3), 3.0),
                           right_hand=np.full((21, 3), 4.0))
    assert not frame.values[:132].any()
    assert np.all(frame.values[132:1536] == 2.0)
    assert np.all(frame.values[1536:1599] == 3.0)
    assert np.all(frame.values[1599:] == 4.0)


def test_wrong_landmark_count_rejected():
    with pytest.raises(BlockShapeError):
        assemble_frame(pose=np.ones((32, 4)))
    with pytest.raises(BlockShapeError):
        assemble_frame(left_hand=np.ones((21, 4)))


def test_non_finite_coordinate_rejected():
    pose = np.ones((33, 4))
    pose[0, 0] = np.nan
    with pytest.raises(InvalidValueError):
        assemble_frame(pose=pose)


def test_window_fills_to_ready():
    w = SequenceWindow()
    assert not w.ready
    for t in range(10):
        window_push(w, assemble_frame(timestamp_ms=t))
    assert w.ready and len(w) == 10


def test_window_evicts_oldest():
    w = SequenceWindow()
    for t in range(11):
        w.push(assemble_frame(timestamp_ms=t))
    assert len(w) == 10 and w.ready
    stamps = [f.timestamp_ms for f in w.frames]
    assert stamps == list(range(1, 11))


def test_window_as_array_shape():
    w = SequenceWindow()
    for t in range(10):
        w.push(assemble_frame(pose=np.full((33, 4), t), timestamp_ms=t))
    arr = w.as_array()
    assert arr.shape == (10, 1662) and arr.dtype == np.float32
    assert arr[3, 0] == 3.0
