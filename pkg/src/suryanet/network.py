"""The stacked-LSTM classifier: parameters, initialization and forward pass.

Canonical architecture over (10, 1662) windows:
    LSTM 64 (sequences) -> LSTM 128 (sequences) -> LSTM 64 (last step)
    -> Dense 64 relu -> Dense 32 relu -> Dense 8 softmax
Per-layer parameter counts 442112, 98816, 49408, 4160, 2080, 264;
total 596840.

LSTM gate rows are stacked in the fixed order [input, forget, candidate,
output] inside the 4h-row kernel, recurrent matrix and bias.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .frames import FRAME_DIM, WINDOW_SIZE
from .labels import NUM_CLASSES

ACTIVATIONS = ("identity", "relu", "softmax")

CANONICAL_LSTM = ((FRAME_DIM, 64, True), (64, 128, True), (128, 64, False))
CANONICAL_DENSE = ((64, 64, "relu"), (64, 32, "relu"), (32, NUM_CLASSES, "softmax"))


@dataclass
class LstmLayerParams:
    w: np.ndarray  # (4h, d) kernel
    u: np.ndarray  # (4h, h) recurrent
    b: np.ndarray  # (4h,)
    return_sequences: bool = True

    @property
    def units(self) -> int:
        return self.u.shape[1]

    @property
    def input_dim(self) -> int:
        return self.w.shape[1]

    @property
    def param_count(self) -> int:
        h, d = self.units, self.input_dim
        return 4 * h * (d + h + 1)

    def __post_init__(self):
        h = self.u.shape[1]
        if self.w.shape[0] != 4 * h or self.u.shape != (4 * h, h) or self.b.shape != (4 * h,):
            raise ShapeError(
                f"inconsistent LSTM shapes w={self.w.shape} u={self.u.shape} b={self.b.shape}")


@dataclass
class DenseLayerParams:
    w: np.ndarray  # (out, in)
    b: np.ndarray  # (out,)
    activation: str = "identity"

    @property
    def param_count(self) -> int:
        out, inp = self.w.shape
        return out * (inp + 1)

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ShapeError(f"unknown activation {self.activation!r}")
        if self.b.shape != (self.w.shape[0],):
            raise ShapeError(f"bias shape {self.b.shape} does not match {self.w.shape}")


@dataclass
class NetworkParams:
    lstm_layers: list[LstmLayerParams] = field(default_factory=list)
    dense_layers: list[DenseLayerParams] = field(default_factory=list)

    @property
    def input_dim(self) -> int:
        return self.lstm_layers[0].input_dim

    @property
    def num_classes(self) -> int:
        return self.dense_layers[-1].w.shape[0]

    def param_arrays(self) -> list[np.ndarray]:
        """All parameter arrays in a fixed declaration order."""
        arrays: list[np.ndarray] = []
        for layer in self.lstm_layers:
            arrays.extend((layer.w, layer.u, layer.b))
        for layer in self.dense_layers:
            arrays.extend((layer.w, layer.b))
        return arrays


def param_count(net: NetworkParams) -> tuple[list[int], int]:
    per_layer = [l.param_count for l in net.lstm_layers] + \
                [l.param_count for l in net.dense_layers]
    return per_layer, sum(per_layer)


def is_canonical(net: NetworkParams) -> bool:
    """Whether the layer table matches the canonical architecture."""
    if len(net.lstm_layers) != len(CANONICAL_LSTM) or \
            len(net.dense_layers) != len(CANONICAL_DENSE):
        return False
    for layer, (d, h, rs) in zip(net.lstm_layers, CANONICAL_LSTM):
        if (layer.input_dim, layer.units, layer.return_sequences) != (d, h, rs):
            return False
    for layer, (inp, out, act) in zip(net.dense_layers, CANONICAL_DENSE):
        if (layer.w.shape[1], layer.w.shape[0], layer.activation) != (inp, out, act):
            return False
    return True


def _glorot(rng: np.random.Generator, shape: tuple[int, int],
            dtype=np.float32) -> np.ndarray:
    fan_out, fan_in = shape
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, shape).astype(dtype)


def init_lstm_layer(rng: np.random.Generator, input_dim: int, units: int,
                    return_sequences: bool, dtype=np.float32) -> LstmLayerParams:
    w = _glorot(rng, (4 * units, input_dim), dtype)
    u = _glorot(rng, (4 * units, units), dtype)
    b = np.zeros(4 * units, dtype=dtype)
    b[units:2 * units] = 1.0  # forget-gate bias
    return LstmLayerParams(w, u, b, return_sequences)


def init_dense_layer(rng: np.random.Generator, input_dim: int, units: int,
                     activation: str, dtype=np.float32) -> DenseLayerParams:
    return DenseLayerParams(_glorot(rng, (units, input_dim), dtype),
                            np.zeros(units, dtype=dtype), activation)


def init_params(seed: int) -> NetworkParams:
    """Glorot-uniform canonical network; LSTM forget biases start at 1.0."""
    rng = np.random.default_rng(seed)
    lstm = [init_lstm_layer(rng, d, h, rs) for d, h, rs in CANONICAL_LSTM]
    dense = [init_dense_layer(rng, i, o, act) for i, o, act in CANONICAL_DENSE]
    return NetworkParams(lstm, dense)


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=-1, keepdims=True)


def lstm_cell_step(layer: LstmLayerParams, x: np.ndarray, h_prev: np.ndarray,
                   c_prev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One step of the standard cell (logistic gates, tanh candidate)."""
    h = layer.units
    if x.shape != (layer.input_dim,) or h_prev.shape != (h,) or c_prev.shape != (h,):
        raise ShapeError(
            f"cell step shapes x={x.shape} h={h_prev.shape} c={c_prev.shape} "
            f"do not match layer (d={layer.input_dim}, h={h})")
    z = layer.w @ x + layer.u @ h_prev + layer.b
    i = sigmoid(z[:h])
    f = sigmoid(z[h:2 * h])
    g = np.tanh(z[2 * h:3 * h])
    o = sigmoid(z[3 * h:])
    c = f * c_prev + i * g
    return o * np.tanh(c), c


@dataclass
class LstmCache:
    x: np.ndarray        # (B, T, d)
    i: np.ndarray        # (B, T, h)
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray
    h: np.ndarray


@dataclass
class DenseCache:
    x: np.ndarray        # (B, in)
    z: np.ndarray        # (B, out) pre-activation


@dataclass
class ForwardCache:
    lstm: list[LstmCache]
    dense: list[DenseCache]
    probs: np.ndarray    # (B, K)


def _lstm_forward(layer: LstmLayerParams, x: np.ndarray) -> LstmCache:
    batch, steps, _ = x.shape
    units = layer.units
    dtype = x.dtype
    shape = (batch, steps, units)
    i_all = np.empty(shape, dtype)
    f_all = np.empty(shape, dtype)
    g_all = np.empty(shape, dtype)
    o_all = np.empty(shape, dtype)
    c_all = np.empty(shape, dtype)
    tanh_c_all = np.empty(shape, dtype)
    h_all = np.empty(shape, dtype)

    # x @ w.T for every step at once; the recurrent term goes step by step
    zx = x.reshape(batch * steps, -1) @ layer.w.T
    zx = zx.reshape(batch, steps, 4 * units)

    h_prev = np.zeros((batch, units), dtype)
    c_prev = np.zeros((batch, units), dtype)
    for t in range(steps):
        z = zx[:, t] + h_prev @ layer.u.T + layer.b
        i = sigmoid(z[:, :units])
        f = sigmoid(z[:, units:2 * units])
        g = np.tanh(z[:, 2 * units:3 * units])
        o = sigmoid(z[:, 3 * units:])
        c = f * c_prev + i * g
        tc = np.tanh(c)
        h = o * tc
        i_all[:, t], f_all[:, t], g_all[:, t], o_all[:, t] = i, f, g, o
        c_all[:, t], tanh_c_all[:, t], h_all[:, t] = c, tc, h
        h_prev, c_prev = h, c
    return LstmCache(x, i_all, f_all, g_all, o_all, c_all, tanh_c_all, h_all)


def forward_with_cache(net: NetworkParams, windows: np.ndarray) -> ForwardCache:
    """Batched forward pass keeping everything backward needs.

    `windows` is (B, T, input_dim); T may differ from the canonical 10 for
    reduced test networks.
    """
    x = np.asarray(windows)
    if x.ndim != 3 or x.shape[2] != net.input_dim:
        raise ShapeError(
            f"windows must be (B, T, {net.input_dim}), got {x.shape}")
    lstm_caches: list[LstmCache] = []
    for layer in net.lstm_layers:
        cache = _lstm_forward(layer, x)
        lstm_caches.append(cache)
        x = cache.h if layer.return_sequences else cache.h[:, -1]
    if net.lstm_layers and net.lstm_layers[-1].return_sequences:
        x = x[:, -1]

    dense_caches: list[DenseCache] = []
    for layer in net.dense_layers:
        z = x @ layer.w.T + layer.b
        dense_caches.append(DenseCache(x, z))
        if layer.activation == "relu":
            x = np.maximum(z, 0)
        elif layer.activation == "softmax":
            x = softmax(z)
        else:
            x = z
    return ForwardCache(lstm_caches, dense_caches, x)


def forward_batch(net: NetworkParams, windows: np.ndarray) -> np.ndarray:
    return forward_with_cache(net, windows).probs


def forward(net: NetworkParams, window: np.ndarray) -> np.ndarray:
    """Class probabilities for one (T, input_dim) window."""
    w = np.asarray(window)
    if w.ndim != 2:
        raise ShapeError(f"window must be 2-d, got shape {w.shape}")
    if is_canonical(net) and w.shape[0] != WINDOW_SIZE:
        raise ShapeError(f"canonical network expects {WINDOW_SIZE} frames, got {w.shape[0]}")
    return forward_batch(net, w[None])[0]
