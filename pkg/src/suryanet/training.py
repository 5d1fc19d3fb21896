"""Loss, backpropagation through time, Adam, and the epoch loop."""

from dataclasses import dataclass, field

import numpy as np

from .dataset import LabeledDataset, split
from .errors import ConfigError, DivergenceError, ShapeError
from .labels import NUM_CLASSES
from .network import (ForwardCache, NetworkParams, forward_with_cache,
                      init_params)

LOSS_CLIP = 1e-7


@dataclass
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7
    batch_size: int = 32
    seed: int = 0
    test_fraction: float = 0.25
    grad_clip: float | None = None  # max global gradient norm, off by default

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not (0.0 < self.test_fraction < 1.0):
            raise ConfigError(
                f"test_fraction must be in (0,1), got {self.test_fraction}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ConfigError(f"grad_clip must be > 0, got {self.grad_clip}")


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float | None = None
    val_acc: float | None = None


@dataclass
class LearningCurve:
    records: list[EpochRecord] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write("epoch,train_loss,train_acc,val_loss,val_acc\n")
            for r in self.records:
                val_loss = "" if r.val_loss is None else f"{r.val_loss:.6g}"
                val_acc = "" if r.val_acc is None else f"{r.val_acc:.6g}"
                f.write(f"{r.epoch},{r.train_loss:.6g},{r.train_acc:.6g},"
                        f"{val_loss},{val_acc}\n")


def cross_entropy(probabilities: np.ndarray, target: np.ndarray) -> float:
    p = np.asarray(probabilities, dtype=np.float64)
    y = np.asarray(target, dtype=np.float64)
    if p.shape != y.shape:
        raise ShapeError(f"probabilities {p.shape} vs target {y.shape}")
    clipped = np.clip(p, LOSS_CLIP, 1.0 - LOSS_CLIP)
    return float(-np.sum(y * np.log(clipped)))


def _batch_loss(probs: np.ndarray, targets: np.ndarray) -> float:
    clipped = np.clip(probs.astype(np.float64), LOSS_CLIP, 1.0 - LOSS_CLIP)
    return float(-np.sum(targets * np.log(clipped)) / probs.shape[0])


def _zeros_like_params(net: NetworkParams) -> list[np.ndarray]:
    return [np.zeros_like(a) for a in net.param_arrays()]


def _lstm_backward(layer, cache, d_h: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """BPTT for one layer. d_h is (B, T, h) upstream gradient on the hidden
    states (zeros where unused). Returns (dX, dW, dU, db)."""
    batch, steps, units = cache.h.shape
    dtype = cache.h.dtype
    dw = np.zeros_like(layer.w)
    du = np.zeros_like(layer.u)
    db = np.zeros_like(layer.b)
    dx = np.empty_like(cache.x)
    dh_next = np.zeros((batch, units), dtype)
    dc_next = np.zeros((batch, units), dtype)

    for t in range(steps - 1, -1, -1):
        i, f, g, o = cache.i[:, t], cache.f[:, t], cache.g[:, t], cache.o[:, t]
        tc = cache.tanh_c[:, t]
        dh = d_h[:, t] + dh_next
        do = dh * tc
        dc = dh * o * (1.0 - tc * tc) + dc_next
        di = dc * g
        dg = dc * i
        c_prev = cache.c[:, t - 1] if t > 0 else np.zeros((batch, units), dtype)
        df = dc * c_prev

        dz = np.concatenate([
            di * i * (1.0 - i),
            df * f * (1.0 - f),
            dg * (1.0 - g * g),
            do * o * (1.0 - o),
        ], axis=1)

        h_prev = cache.h[:, t - 1] if t > 0 else np.zeros((batch, units), dtype)
        dw += dz.T @ cache.x[:, t]
        du += dz.T @ h_prev
        db += dz.sum(axis=0)
        dx[:, t] = dz @ layer.w
        dh_next = dz @ layer.u
        dc_next = dc * f
    return dx, dw, du, db


def _backward_cache(net: NetworkParams, cache: ForwardCache,
                    targets: np.ndarray, scale: float) -> list[np.ndarray]:
    """Gradients of scale * sum of per-sample cross-entropy losses."""
    batch = targets.shape[0]
    grads = _zeros_like_params(net)
    n_lstm = len(net.lstm_layers)

    # softmax + cross-entropy combine to p - y at the output logits
    d = (cache.probs - targets).astype(cache.probs.dtype) * scale
    for li in range(len(net.dense_layers) - 1, -1, -1):
        layer = net.dense_layers[li]
        dcache = cache.dense[li]
        if li < len(net.dense_layers) - 1:
            if layer.activation == "relu":
                d = d * (dcache.z > 0)
            elif layer.activation == "softmax":
                raise ShapeError("softmax is only supported as the output layer")
        base = 3 * n_lstm + 2 * li
        grads[base] += d.T @ dcache.x
        grads[base + 1] += d.sum(axis=0)
        d = d @ layer.w

    # route the dense gradient into the hidden-state stream
    for li in range(n_lstm - 1, -1, -1):
        layer = net.lstm_layers[li]
        lcache = cache.lstm[li]
        steps = lcache.h.shape[1]
        if d.ndim == 2:  # gradient only on the final step
            d_h = np.zeros_like(lcache.h)
            d_h[:, steps - 1] = d
        else:
            d_h = d
        dx, dw, du, db = _lstm_backward(layer, lcache, d_h)
        base = 3 * li
        grads[base] += dw
        grads[base + 1] += du
        grads[base + 2] += db
        d = dx
    return grads


def backward(net: NetworkParams, window: np.ndarray, target: np.ndarray
             ) -> list[np.ndarray]:
    """Exact gradients of cross_entropy(forward(net, window), target),
    returned in net.param_arrays() order."""
    w = np.asarray(window)
    if w.ndim != 2:
        raise ShapeError(f"window must be 2-d, got {w.shape}")
    y = np.asarray(target)
    cache = forward_with_cache(net, w[None])
    if y.shape != (cache.probs.shape[1],):
        raise ShapeError(f"target {y.shape} does not match {cache.probs.shape[1]} classes")
    return _backward_cache(net, cache, y[None], 1.0)


def backward_batch(net: NetworkParams, windows: np.ndarray, targets: np.ndarray
                   ) -> tuple[float, list[np.ndarray], np.ndarray]:
    """Mean loss, mean-loss gradients and the batch probabilities."""
    cache = forward_with_cache(net, windows)
    grads = _backward_cache(net, cache, targets, 1.0 / windows.shape[0])
    return _batch_loss(cache.probs, targets), grads, cache.probs


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0

    @classmethod
    def for_network(cls, net: NetworkParams) -> "AdamState":
        return cls(_zeros_like_params(net), _zeros_like_params(net))


def adam_step(net: NetworkParams, gradients: list[np.ndarray], state: AdamState,
              config: TrainConfig) -> tuple[NetworkParams, AdamState]:
    """Bias-corrected Adam update applied in place; returns (net, state)."""
    params = net.param_arrays()
    if len(gradients) != len(params):
        raise ShapeError(
            f"{len(gradients)} gradient arrays for {len(params)} parameter arrays")
    if config.grad_clip is not None:
        norm = float(np.sqrt(sum(float(np.sum(g.astype(np.float64) ** 2))
                                 for g in gradients)))
        if norm > config.grad_clip:
            gradients = [g * (config.grad_clip / norm) for g in gradients]
    state.t += 1
    b1, b2 = config.beta1, config.beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for p, g, m, v in zip(params, gradients, state.m, state.v):
        if g.shape != p.shape:
            raise ShapeError(f"gradient shape {g.shape} vs parameter {p.shape}")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        m_hat = m / correction1
        v_hat = v / correction2
        p -= (config.learning_rate * m_hat /
              (np.sqrt(v_hat) + config.epsilon)).astype(p.dtype)
    return net, state


def _accuracy_from_probs(probs: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def train(dataset: LabeledDataset, config: TrainConfig,
          net: NetworkParams | None = None
          ) -> tuple[NetworkParams, LearningCurve]:
    """Stratified split, Glorot init, shuffled mini-batch Adam with
    per-epoch learning-curve capture."""
    train_set, test_set = split(dataset, config.test_fraction, config.seed)
    x_train, y_train = train_set.arrays()
    x_val, y_val = test_set.arrays()
    num_classes = NUM_CLASSES
    t_train = np.eye(num_classes, dtype=np.float32)[y_train]
    t_val = np.eye(num_classes, dtype=np.float32)[y_val]

    if net is None:
        net = init_params(config.seed)
    state = AdamState.for_network(net)
    rng = np.random.default_rng(config.seed)
    curve = LearningCurve()
    n = x_train.shape[0]

    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        loss_sum = 0.0
        correct = 0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            loss, grads, probs = backward_batch(net, x_train[idx], t_train[idx])
            if not np.isfinite(loss):
                raise DivergenceError(f"non-finite training loss at epoch {epoch}")
            loss_sum += loss * len(idx)
            correct += int(np.sum(np.argmax(probs, axis=1) == y_train[idx]))
            adam_step(net, grads, state, config)

        record = EpochRecord(epoch, loss_sum / n, correct / n)
        if len(x_val):
            val_probs = forward_with_cache(net, x_val).probs
            record.val_loss = _batch_loss(val_probs, t_val)
            record.val_acc = _accuracy_from_probs(val_probs, y_val)
        curve.records.append(record)
    return net, curve
