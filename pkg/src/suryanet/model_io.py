"""Model persistence: the SNKM binary format.

Layout (little-endian):
    magic "SNKM" | u16 version=1 | u16 num_layers |
    layer table: per layer
        u8 type (1 = lstm, 2 = dense)
        lstm:  u16 input_dim | u16 units | u8 flags (bit0 return_sequences)
        dense: u16 input_dim | u16 units | u8 activation (0 identity,
               1 relu, 2 softmax)
    payload: per layer in table order, f32 values
        lstm:  kernel (4h*d), recurrent (4h*h), bias (4h)
        dense: weights (out*in), bias (out)
"""

import struct

import numpy as np

from .errors import CorruptModelError, FormatError
from .network import DenseLayerParams, LstmLayerParams, NetworkParams

MODEL_MAGIC = b"SNKM"
MODEL_VERSION = 1

_LSTM_TYPE = 1
_DENSE_TYPE = 2
_ACT_CODES = {"identity": 0, "relu": 1, "softmax": 2}
_ACT_NAMES = {v: k for k, v in _ACT_CODES.items()}


def save_model(net: NetworkParams, path) -> None:
    header = bytearray()
    header += MODEL_MAGIC
    header += struct.pack("<HH", MODEL_VERSION,
                          len(net.lstm_layers) + len(net.dense_layers))
    for layer in net.lstm_layers:
        header += struct.pack("<BHHB", _LSTM_TYPE, layer.input_dim, layer.units,
                              1 if layer.return_sequences else 0)
    for layer in net.dense_layers:
        out, inp = layer.w.shape
        header += struct.pack("<BHHB", _DENSE_TYPE, inp, out,
                              _ACT_CODES[layer.activation])
    with open(path, "wb") as f:
        f.write(bytes(header))
        for arr in net.param_arrays():
            f.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def load_model(path) -> NetworkParams:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 8:
        raise FormatError(f"{path}: file shorter than header")
    if raw[:4] != MODEL_MAGIC:
        raise FormatError(f"{path}: bad magic {raw[:4]!r}")
    version, num_layers = struct.unpack_from("<HH", raw, 4)
    if version != MODEL_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")

    offset = 8
    table: list[tuple[int, int, int, int]] = []
    for _ in range(num_layers):
        if offset + 6 > len(raw):
            raise CorruptModelError(f"{path}: truncated layer table")
        kind, dim_in, units, extra = struct.unpack_from("<BHHB", raw, offset)
        offset += 6
        if kind not in (_LSTM_TYPE, _DENSE_TYPE):
            raise CorruptModelError(f"{path}: unknown layer type {kind}")
        if kind == _DENSE_TYPE and extra not in _ACT_NAMES:
            raise CorruptModelError(f"{path}: unknown activation code {extra}")
        table.append((kind, dim_in, units, extra))

    expected = sum(4 * h * (d + h + 1) if kind == _LSTM_TYPE else h * (d + 1)
                   for kind, d, h, _ in table)
    payload = raw[offset:]
    if len(payload) != expected * 4:
        raise CorruptModelError(
            f"{path}: payload is {len(payload)} bytes, layer table declares "
            f"{expected * 4}")

    values = np.frombuffer(payload, dtype="<f4")
    pos = 0

    def take(n: int, shape: tuple[int, ...]) -> np.ndarray:
        nonlocal pos
        arr = values[pos:pos + n].reshape(shape).copy()
        pos += n
        return arr

    lstm_layers: list[LstmLayerParams] = []
    dense_layers: list[DenseLayerParams] = []
    for kind, d, h, extra in table:
        if kind == _LSTM_TYPE:
            w = take(4 * h * d, (4 * h, d))
            u = take(4 * h * h, (4 * h, h))
            b = take(4 * h, (4 * h,))
            lstm_layers.append(LstmLayerParams(w, u, b, bool(extra & 1)))
        else:
            w = take(h * d, (h, d))
            b = take(h, (h,))
            dense_layers.append(DenseLayerParams(w, b, _ACT_NAMES[extra]))
    return NetworkParams(lstm_layers, dense_layers)
