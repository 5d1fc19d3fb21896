"""The streaming wire protocol.

Every message is framed as `u32 payload_length | u8 message_type |
payload`, all little-endian; payload_length counts payload bytes only.

Types:
    0x01 HELLO       u16 version | u16 dim
    0x02 HELLO_ACK   u8 num_classes | per class: u8 name_len | UTF-8 name
    0x10 FRAME       u64 timestamp_ms | u16 dim | dim * f32
    0x20 PREDICTION  u64 timestamp_ms | u8 class_index | 8 * f32 | u8 flags
    0x21 CYCLE       u8 event_code | u8 step_index | u8 expected_class |
                     u8 observed_class
    0x7F ERROR       u8 code | u8 msg_len | UTF-8 message
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ProtocolError
from .labels import NUM_CLASSES

PROTOCOL_VERSION = 1

HELLO = 0x01
HELLO_ACK = 0x02
FRAME = 0x10
PREDICTION = 0x20
CYCLE = 0x21
ERROR = 0x7F

# error codes carried by ERROR messages
ERR_BAD_VERSION = 1
ERR_BAD_DIM = 2
ERR_BAD_MESSAGE = 3
ERR_ORDERING = 4
ERR_INTERNAL = 5

STABLE_FLAG = 0x01

# cycle event codes
EVENT_ADVANCE = 0
EVENT_HOLD = 1
EVENT_OUT_OF_ORDER = 2
EVENT_CYCLE_COMPLETE = 3


@dataclass(frozen=True)
class HelloMsg:
    version: int
    dim: int


@dataclass(frozen=True)
class HelloAckMsg:
    class_names: tuple[str, ...]


@dataclass(frozen=True)
class FrameMsg:
    timestamp_ms: int
    values: np.ndarray  # (dim,) float32

    def __eq__(self, other):
        return (isinstance(other, FrameMsg)
                and self.timestamp_ms == other.timestamp_ms
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True)
class PredictionMsg:
    timestamp_ms: int
    class_index: int
    probabilities: np.ndarray  # (8,) float32
    stable: bool

    def __eq__(self, other):
        return (isinstance(other, PredictionMsg)
                and self.timestamp_ms == other.timestamp_ms
                and self.class_index == other.class_index
                and self.stable == other.stable
                and np.array_equal(self.probabilities, other.probabilities))


@dataclass(frozen=True)
class CycleMsg:
    event_code: int
    step_index: int
    expected_class: int
    observed_class: int


@dataclass(frozen=True)
class ErrorMsg:
    code: int
    message: str


Message = HelloMsg | HelloAckMsg | FrameMsg | PredictionMsg | CycleMsg | ErrorMsg


def _frame_bytes(msg_type: int, payload: bytes) -> bytes:
    return struct.pack("<IB", len(payload), msg_type) + payload


def encode(msg: Message) -> bytes:
    if isinstance(msg, HelloMsg):
        return _frame_bytes(HELLO, struct.pack("<HH", msg.version, msg.dim))
    if isinstance(msg, HelloAckMsg):
        payload = bytearray(struct.pack("<B", len(msg.class_names)))
        for name in msg.class_names:
            raw = name.encode("utf-8")
            payload += struct.pack("<B", len(raw)) + raw
        return _frame_bytes(HELLO_ACK, bytes(payload))
    if isinstance(msg, FrameMsg):
        values = np.ascontiguousarray(msg.values, dtype="<f4")
        payload = struct.pack("<QH", msg.timestamp_ms, values.size) + values.tobytes()
        return _frame_bytes(FRAME, payload)
    if isinstance(msg, PredictionMsg):
        probs = np.ascontiguousarray(msg.probabilities, dtype="<f4")
        if probs.size != NUM_CLASSES:
            raise ProtocolError(ERR_BAD_MESSAGE,
                                f"prediction needs {NUM_CLASSES} probabilities")
        flags = STABLE_FLAG if msg.stable else 0
        payload = (struct.pack("<QB", msg.timestamp_ms, msg.class_index)
                   + probs.tobytes() + struct.pack("<B", flags))
        return _frame_bytes(PREDICTION, payload)
    if isinstance(msg, CycleMsg):
        return _frame_bytes(CYCLE, struct.pack(
            "<BBBB", msg.event_code, msg.step_index,
            msg.expected_class, msg.observed_class))
    if isinstance(msg, ErrorMsg):
        raw = msg.message.encode("utf-8")
        return _frame_bytes(ERROR, struct.pack("<BB", msg.code, len(raw)) + raw)
    raise ProtocolError(ERR_BAD_MESSAGE, f"cannot encode {type(msg).__name__}")


def _decode_payload(msg_type: int, payload: bytes) -> Message:
    try:
        if msg_type == HELLO:
            version, dim = struct.unpack("<HH", payload)
            return HelloMsg(version, dim)
        if msg_type == HELLO_ACK:
            (count,) = struct.unpack_from("<B", payload)
            names = []
            pos = 1
            for _ in range(count):
                (ln,) = struct.unpack_from("<B", payload, pos)
                pos += 1
                names.append(payload[pos:pos + ln].decode("utf-8"))
                pos += ln
            if pos != len(payload):
                raise ProtocolError(ERR_BAD_MESSAGE, "trailing bytes in HELLO_ACK")
            return HelloAckMsg(tuple(names))
        if msg_type == FRAME:
            timestamp_ms, dim = struct.unpack_from("<QH", payload)
            raw = payload[10:]
            if len(raw) != dim * 4:
                raise ProtocolError(ERR_BAD_MESSAGE,
                                    f"FRAME declares dim {dim} but carries "
                                    f"{len(raw)} payload bytes")
            values = np.frombuffer(raw, dtype="<f4").copy()
            return FrameMsg(timestamp_ms, values)
        if msg_type == PREDICTION:
            timestamp_ms, class_index = struct.unpack_from("<QB", payload)
            probs = np.frombuffer(payload[9:9 + NUM_CLASSES * 4], dtype="<f4").copy()
            if len(payload) != 9 + NUM_CLASSES * 4 + 1:
                raise ProtocolError(ERR_BAD_MESSAGE, "bad PREDICTION size")
            (flags,) = struct.unpack_from("<B", payload, 9 + NUM_CLASSES * 4)
            return PredictionMsg(timestamp_ms, class_index, probs,
                                 bool(flags & STABLE_FLAG))
        if msg_type == CYCLE:
            return CycleMsg(*struct.unpack("<BBBB", payload))
        if msg_type == ERROR:
            code, ln = struct.unpack_from("<BB", payload)
            if len(payload) != 2 + ln:
                raise ProtocolError(ERR_BAD_MESSAGE, "bad ERROR size")
            return ErrorMsg(code, payload[2:].decode("utf-8"))
    except struct.error as exc:
        raise ProtocolError(ERR_BAD_MESSAGE, f"malformed payload: {exc}") from exc
    raise ProtocolError(ERR_BAD_MESSAGE, f"unknown message type 0x{msg_type:02x}")


class MessageReader:
    """Incremental decoder over an arbitrary byte stream."""

    MAX_PAYLOAD = 1 << 20

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[Message]:
        self._buf += data
        out: list[Message] = []
        while True:
            if len(self._buf) < 5:
                return out
            (length,) = struct.unpack_from("<I", self._buf)
            if length > self.MAX_PAYLOAD:
                raise ProtocolError(ERR_BAD_MESSAGE,
                                    f"payload length {length} exceeds limit")
            if len(self._buf) < 5 + length:
                return out
            msg_type = self._buf[4]
            payload = bytes(self._buf[5:5 + length])
            del self._buf[:5 + length]
            out.append(_decode_payload(msg_type, payload))


def decode_all(data: bytes) -> list[Message]:
    reader = MessageReader()
    messages = reader.feed(data)
    if reader._buf:
        raise ProtocolError(ERR_BAD_MESSAGE, "trailing partial message")
    return messages
