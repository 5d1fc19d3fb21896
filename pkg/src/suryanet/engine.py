"""Streaming inference: sliding-window prediction, stability smoothing,
the 12-step cycle tracker, and the framed socket/stdio server."""

import socket
import socketserver
import sys
import threading
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import protocol
from .errors import OrderingError, ProtocolError, ShapeError
from .frames import FRAME_DIM, WINDOW_SIZE, KeypointFrame, SequenceWindow
from .labels import CLASS_NAMES, ClassLabel
from .network import NetworkParams, forward
from .protocol import (EVENT_ADVANCE, EVENT_CYCLE_COMPLETE, EVENT_HOLD,
                       EVENT_OUT_OF_ORDER)

# one Surya Namaskar cycle: 12 steps over the 8 asanas, the first four repeated
CYCLE_SEQUENCE: tuple[int, ...] = (0, 1, 2, 3, 4, 5, 6, 7, 3, 2, 1, 0)

DEFAULT_TAU = 0.7
DEFAULT_STABILITY_N = 5


@dataclass(frozen=True)
class Prediction:
    timestamp_ms: int
    probabilities: np.ndarray
    top_class: ClassLabel
    stable: bool


@dataclass(frozen=True)
class CycleEvent:
    code: int            # protocol EVENT_* constant
    step_index: int      # tracker position after the event
    expected: ClassLabel
    observed: ClassLabel


class CycleTracker:
    """Position within the 12-step sequence, fed with stable classes only."""

    def __init__(self, sequence: tuple[int, ...] = CYCLE_SEQUENCE):
        if len(set(sequence)) != 8:
            raise ValueError("cycle sequence must cover exactly 8 classes")
        self.sequence = sequence
        self.step_index = 0
        self.completed_cycles = 0

    def advance(self, stable_class: ClassLabel) -> CycleEvent:
        expected = self.sequence[self.step_index]
        previous = self.sequence[(self.step_index - 1) % len(self.sequence)]
        expected_label = ClassLabel.from_index(expected)
        if stable_class.index == expected:
            self.step_index = (self.step_index + 1) % len(self.sequence)
            if self.step_index == 0:
                self.completed_cycles += 1
                code = EVENT_CYCLE_COMPLETE
            else:
                code = EVENT_ADVANCE
            return CycleEvent(code, self.step_index, expected_label, stable_class)
        if stable_class.index == previous:
            return CycleEvent(EVENT_HOLD, self.step_index, expected_label, stable_class)
        return CycleEvent(EVENT_OUT_OF_ORDER, self.step_index, expected_label,
                          stable_class)


def advance_cycle(tracker: CycleTracker, stable_class: ClassLabel) -> CycleEvent:
    return tracker.advance(stable_class)


class SessionState:
    """One client's window, stability votes, cycle tracker and timestamps."""

    def __init__(self, tau: float = DEFAULT_TAU,
                 stability_n: int = DEFAULT_STABILITY_N,
                 sequence: tuple[int, ...] = CYCLE_SEQUENCE):
        self.window = SequenceWindow(WINDOW_SIZE)
        self.tau = tau
        self.stability_n = stability_n
        self.votes: deque[tuple[int, float]] = deque(maxlen=stability_n)
        self.tracker = CycleTracker(sequence)
        self.last_timestamp: int | None = None
        self.last_stable_class: int | None = None

    def _stable(self) -> bool:
        if len(self.votes) < self.stability_n:
            return False
        tops = {c for c, _ in self.votes}
        return len(tops) == 1 and all(p >= self.tau for _, p in self.votes)


def ingest_frame(session: SessionState, net: NetworkParams,
                 frame: KeypointFrame) -> Prediction | None:
    """Push a frame; once the window is full, predict on every frame."""
    if frame.values.shape != (FRAME_DIM,):
        raise ShapeError(f"frame has {frame.values.shape[0]} values, "
                         f"expected {FRAME_DIM}")
    if session.last_timestamp is not None and frame.timestamp_ms < session.last_timestamp:
        raise OrderingError(
            f"timestamp {frame.timestamp_ms} decreased below {session.last_timestamp}")
    session.last_timestamp = frame.timestamp_ms
    session.window.push(frame)
    if not session.window.ready:
        return None
    probs = forward(net, session.window.as_array())
    top = int(np.argmax(probs))
    session.votes.append((top, float(probs[top])))
    return Prediction(frame.timestamp_ms, probs, ClassLabel.from_index(top),
                      session._stable())


def step_session(session: SessionState, net: NetworkParams,
                 frame: KeypointFrame) -> tuple[Prediction | None, CycleEvent | None]:
    """ingest_frame plus cycle tracking on stable predictions."""
    prediction = ingest_frame(session, net, frame)
    event = None
    if prediction is not None and prediction.stable:
        event = session.tracker.advance(prediction.top_class)
    return prediction, event


def replay(net: NetworkParams, frames: np.ndarray,
           tau: float = DEFAULT_TAU, stability_n: int = DEFAULT_STABILITY_N,
           fps: float = 60.0) -> list[tuple[Prediction | None, CycleEvent | None]]:
    """Run a (T, 1662) frame array through one offline session."""
    session = SessionState(tau=tau, stability_n=stability_n)
    out = []
    for t, values in enumerate(np.asarray(frames, dtype=np.float32)):
        frame = KeypointFrame(int(round(t * 1000.0 / fps)), values)
        out.append(step_session(session, net, frame))
    return out


class _Connection:
    """Protocol state machine shared by the socket and stdio transports."""

    def __init__(self, net: NetworkParams, tau: float, stability_n: int):
        self.net = net
        self.tau = tau
        self.stability_n = stability_n
        self.session: SessionState | None = None
        self.reader = protocol.MessageReader()

    def handle_bytes(self, data: bytes) -> tuple[list[bytes], bool]:
        """Returns (replies, keep_open)."""
        replies: list[bytes] = []
        try:
            messages = self.reader.feed(data)
        except ProtocolError as exc:
            replies.append(protocol.encode(
                protocol.ErrorMsg(exc.code, str(exc))))
            return replies, False
        for msg in messages:
            try:
                replies.extend(self._handle(msg))
            except ProtocolError as exc:
                replies.append(protocol.encode(
                    protocol.ErrorMsg(exc.code, str(exc))))
                return replies, False
            except OrderingError as exc:
                replies.append(protocol.encode(
                    protocol.ErrorMsg(protocol.ERR_ORDERING, str(exc))))
                return replies, False
        return replies, True

    def _handle(self, msg) -> list[bytes]:
        if isinstance(msg, protocol.HelloMsg):
            if self.session is not None:
                raise ProtocolError(protocol.ERR_BAD_MESSAGE, "duplicate HELLO")
            if msg.version != protocol.PROTOCOL_VERSION:
                raise ProtocolError(protocol.ERR_BAD_VERSION,
                                    f"unsupported protocol version {msg.version}")
            if msg.dim != self.net.input_dim:
                raise ProtocolError(protocol.ERR_BAD_DIM,
                                    f"model expects dim {self.net.input_dim}, "
                                    f"client sent {msg.dim}")
            self.session = SessionState(self.tau, self.stability_n)
            return [protocol.encode(protocol.HelloAckMsg(CLASS_NAMES))]
        if isinstance(msg, protocol.FrameMsg):
            if self.session is None:
                raise ProtocolError(protocol.ERR_BAD_MESSAGE, "FRAME before HELLO")
            if msg.values.shape[0] != self.net.input_dim:
                raise ProtocolError(protocol.ERR_BAD_DIM,
                                    f"frame dim {msg.values.shape[0]} != "
                                    f"{self.net.input_dim}")
            frame = KeypointFrame(msg.timestamp_ms,
                                  msg.values.astype(np.float32, copy=False))
            prediction, event = step_session(self.session, self.net, frame)
            replies = []
            if prediction is not None:
                replies.append(protocol.encode(protocol.PredictionMsg(
                    prediction.timestamp_ms, prediction.top_class.index,
                    prediction.probabilities.astype(np.float32),
                    prediction.stable)))
            if event is not None:
                replies.append(protocol.encode(protocol.CycleMsg(
                    event.code, event.step_index, event.expected.index,
                    event.observed.index)))
            return replies
        raise ProtocolError(protocol.ERR_BAD_MESSAGE,
                            f"unexpected message {type(msg).__name__}")


class EngineServer:
    """Threaded stream-socket server; the model is shared read-only."""

    def __init__(self, net: NetworkParams, host: str = "127.0.0.1",
                 port: int = 0, tau: float = DEFAULT_TAU,
                 stability_n: int = DEFAULT_STABILITY_N):
        self.net = net
        self.tau = tau
        self.stability_n = stability_n
        engine = self

        class Handler(socketserver.BaseRequestHandler):
            def handle(self):
                conn = _Connection(engine.net, engine.tau, engine.stability_n)
                sock: socket.socket = self.request
                while True:
                    data = sock.recv(65536)
                    if not data:
                        return
                    replies, keep_open = conn.handle_bytes(data)
                    for reply in replies:
                        sock.sendall(reply)
                    if not keep_open:
                        return

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._server = Server((host, port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join()


def serve_stdio(net: NetworkParams, tau: float = DEFAULT_TAU,
                stability_n: int = DEFAULT_STABILITY_N,
                stdin=None, stdout=None) -> None:
    """Single-session server over binary stdio; returns on EOF or error."""
    stdin = stdin if stdin is not None else sys.stdin.buffer
    stdout = stdout if stdout is not None else sys.stdout.buffer
    conn = _Connection(net, tau, stability_n)
    while True:
        data = stdin.read1(65536) if hasattr(stdin, "read1") else stdin.read(65536)
        if not data:
            return
        replies, keep_open = conn.handle_bytes(data)
        for reply in replies:
            stdout.write(reply)
        stdout.flush()
        if not keep_open:
            return
