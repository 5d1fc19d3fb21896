import socket

import numpy as np
import pytest

from suryanet import protocol
from suryanet.engine import (CYCLE_SEQUENCE, CycleTracker, EngineServer,
                             SessionState, advance_cycle, ingest_frame,
                             replay, serve_stdio)
from suryanet.errors import OrderingError
from suryanet.fixtures import fixture_frames, golden_records
from suryanet.frames import KeypointFrame
from suryanet.labels import ClassLabel
from suryanet.network import init_params
from suryanet.protocol import (EVENT_ADVANCE, EVENT_CYCLE_COMPLETE,
                               EVENT_HOLD, EVENT_OUT_OF_ORDER)


@pytest.fixture(scope="module")
def net():
    return init_params(11)


def make_frame(t, rng=None):
    values = (rng.normal(0, 0.5, 1662).astype(np.float32) if rng is not None
              else np.zeros(1662, dtype=np.float32))
    return KeypointFrame(t, values)


def test_no_prediction_until_window_ready(net):
    session = SessionState()
    rng = np.random.default_rng(0)
    for t in range(9):
        assert ingest_frame(session, net, make_frame(t, rng)) is None
    assert ingest_frame(session, net, make_frame(9, rng)) is not None


def test_prediction_count_is_frames_minus_nine(net):
    rng = np.random.default_rng(1)
    for total in (5, 10, 17, 40):
        session = SessionState()
        count = sum(ingest_frame(session, net, make_frame(t, rng)) is not None
                    for t in range(total))
        assert count == max(0, total - 9)


def test_decreasing_timestamp_rejected(net):
    session = SessionState()
    ingest_frame(session, net, make_frame(10))
    with pytest.raises(OrderingError):
        ingest_frame(session, net, make_frame(9))


def test_prediction_fields(net):
    session = SessionState()
    rng = np.random.default_rng(2)
    prediction = None
    for t in range(10):
        prediction = ingest_frame(session, net, make_frame(t, rng))
    assert prediction.top_class.index == int(np.argmax(prediction.probabilities))
    assert abs(prediction.probabilities.sum() - 1.0) < 1e-5


def test_stability_needs_n_consistent_windows():
    session = SessionState(tau=0.7, stability_n=5)
    # drive the vote buffer directly: 14 consistent windows
    stable_at = None
    for k in range(14):
        session.votes.append((0, 0.9))
        if session._stable() and stable_at is None:
            stable_at = k + 1
    assert stable_at == 5


def test_stability_broken_by_low_probability():
    session = SessionState(tau=0.7, stability_n=5)
    for _ in range(4):
        session.votes.append((0, 0.9))
    session.votes.append((0, 0.5))
    assert not session._stable()


def test_stability_requires_single_class_property():
    rng = np.random.default_rng(3)
    session = SessionState(tau=0.0, stability_n=4)
    for _ in range(500):
        session.votes.append((int(rng.integers(0, 8)), float(rng.random())))
        if session._stable():
            assert len({c for c, _ in session.votes}) == 1


def test_cycle_sequence_shape():
    assert len(CYCLE_SEQUENCE) == 12
    assert len(set(CYCLE_SEQUENCE)) == 8
    repeated = [c for c in set(CYCLE_SEQUENCE) if CYCLE_SEQUENCE.count(c) == 2]
    assert sorted(repeated) == [0, 1, 2, 3]


def test_cycle_advance():
    tracker = CycleTracker()
    event = advance_cycle(tracker, ClassLabel.from_index(0))
    assert event.code == EVENT_ADVANCE
    assert tracker.step_index == 1


def test_cycle_out_of_order():
    tracker = CycleTracker()
    event = advance_cycle(tracker, ClassLabel.from_index(5))
    assert event.code == EVENT_OUT_OF_ORDER
    assert event.expected.name == "Pranamasana"
    assert event.observed.name == "Ashtanga Namaskara"
    assert tracker.step_index == 0


def test_cycle_hold():
    tracker = CycleTracker()
    advance_cycle(tracker, ClassLabel.from_index(0))
    event = advance_cycle(tracker, ClassLabel.from_index(0))
    assert event.code == EVENT_HOLD
    assert tracker.step_index == 1


def test_full_cycle_completes():
    tracker = CycleTracker()
    events = [advance_cycle(tracker, ClassLabel.from_index(c))
              for c in CYCLE_SEQUENCE]
    assert [e.code for e in events[:11]] == [EVENT_ADVANCE] * 11
    assert events[-1].code == EVENT_CYCLE_COMPLETE
    assert tracker.completed_cycles == 1
    assert tracker.step_index == 0


def test_cycle_step_changes_by_zero_or_one():
    rng = np.random.default_rng(4)
    tracker = CycleTracker()
    for _ in range(300):
        before = tracker.step_index
        advance_cycle(tracker, ClassLabel.from_index(int(rng.integers(0, 8))))
        after = tracker.step_index
        assert (after - before) % 12 in (0, 1)


def hello_and_stream(address, frames, fps=60.0):
    """Speak the protocol over a socket, returning all reply messages."""
    sock = socket.create_connection(address)
    reader = protocol.MessageReader()
    replies = []
    try:
        sock.sendall(protocol.encode(protocol.HelloMsg(1, frames.shape[1])))
        for t, values in enumerate(frames):
            sock.sendall(protocol.encode(
                protocol.FrameMsg(int(t * 1000 / fps), values)))
        sock.shutdown(socket.SHUT_WR)
        while True:
            data = sock.recv(65536)
            if not data:
                break
            replies.extend(reader.feed(data))
    finally:
        sock.close()
    return replies


@pytest.fixture(scope="module")
def server(net):
    srv = EngineServer(net, port=0)
    srv.start()
    yield srv
    srv.stop()


def test_serve_handshake(server):
    sock = socket.create_connection(server.address)
    reader = protocol.MessageReader()
    try:
        sock.sendall(protocol.encode(protocol.HelloMsg(1, 1662)))
        messages = []
        while not messages:
            messages = reader.feed(sock.recv(65536))
        ack = messages[0]
        assert isinstance(ack, protocol.HelloAckMsg)
        assert len(ack.class_names) == 8
        assert ack.class_names[0] == "Pranamasana"
    finally:
        sock.close()


def test_serve_bad_dim_closes_connection(server):
    sock = socket.create_connection(server.address)
    reader = protocol.MessageReader()
    try:
        sock.sendall(protocol.encode(protocol.HelloMsg(1, 1600)))
        messages = []
        while True:
            data = sock.recv(65536)
            if not data:
                break
            messages.extend(reader.feed(data))
        assert len(messages) == 1
        assert isinstance(messages[0], protocol.ErrorMsg)
        assert messages[0].code == protocol.ERR_BAD_DIM
    finally:
        sock.close()


def test_serve_replay_deterministic(server, net):
    frames = fixture_frames()
    runs = []
    for _ in range(2):
        replies = hello_and_stream(server.address, frames)
        predictions = [m for m in replies
                       if isinstance(m, protocol.PredictionMsg)]
        runs.append(predictions)
    assert len(runs[0]) == 111
    assert runs[0] == runs[1]


def test_serve_matches_offline_replay(server, net):
    frames = fixture_frames()
    replies = hello_and_stream(server.address, frames)
    predictions = [m for m in replies if isinstance(m, protocol.PredictionMsg)]
    offline = [p for p, _ in replay(net, frames) if p is not None]
    assert len(predictions) == len(offline)
    for wire, local in zip(predictions, offline):
        assert wire.class_index == local.top_class.index
        assert wire.stable == local.stable
        assert np.array_equal(wire.probabilities,
                              local.probabilities.astype(np.float32))


def test_stdio_transport_matches_socket(server, net):
    import io
    frames = fixture_frames()
    request = bytearray(protocol.encode(protocol.HelloMsg(1, 1662)))
    for t, values in enumerate(frames):
        request += protocol.encode(protocol.FrameMsg(int(t * 1000 / 60), values))
    stdout = io.BytesIO()
    serve_stdio(net, stdin=io.BytesIO(bytes(request)), stdout=stdout)
    stdio_msgs = protocol.decode_all(stdout.getvalue())
    socket_msgs = hello_and_stream(server.address, frames)
    assert stdio_msgs == socket_msgs


def test_golden_records_match_replay(net):
    frames = fixture_frames()
    records = golden_records(net, frames)
    predictions = [r for r in records if r["type"] == "prediction"]
    assert len(predictions) == 111
    offline = [p for p, _ in replay(net, frames) if p is not None]
    for rec, pred in zip(predictions, offline):
        assert rec["class_index"] == pred.top_class.index
