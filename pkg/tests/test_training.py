import math

import numpy as np
import pytest

from conftest import make_tiny_net
from suryanet.dataset import gen_synthetic
from suryanet.errors import ConfigError, ShapeError
from suryanet.network import forward
from suryanet.training import (AdamState, LearningCurve, EpochRecord,
                               TrainConfig, adam_step, backward,
                               cross_entropy, train)


def finite_difference_grads(net, window, target, eps=1e-5):
    grads = []
    for arr in net.param_arrays():
        g = np.zeros_like(arr)
        it = np.nditer(arr, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = arr[idx]
            arr[idx] = orig + eps
            lp = cross_entropy(forward(net, window), target)
            arr[idx] = orig - eps
            lm = cross_entropy(forward(net, window), target)
            arr[idx] = orig
            g[idx] = (lp - lm) / (2 * eps)
        grads.append(g)
    return grads


def max_relative_error(a_list, b_list):
    worst = 0.0
    for a, b in zip(a_list, b_list):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-6)
        worst = max(worst, float(np.max(np.abs(a - b) / denom)))
    return worst


def test_cross_entropy_perfect_prediction():
    y = np.array([0, 1, 0, 0, 0, 0, 0, 0], dtype=np.float64)
    assert cross_entropy(y, y) < 1e-6


def test_cross_entropy_uniform():
    p = np.full(8, 0.125)
    y = np.zeros(8)
    y[3] = 1.0
    assert abs(cross_entropy(p, y) - math.log(8)) < 1e-12


def test_cross_entropy_clip():
    p = np.zeros(8)
    p[0] = 1.0
    y = np.zeros(8)
    y[5] = 1.0
    assert abs(cross_entropy(p, y) - (-math.log(1e-7))) < 1e-9


def test_cross_entropy_shape_error():
    with pytest.raises(ShapeError):
        cross_entropy(np.full(8, 0.125), np.zeros(4))


def test_backward_zero_net_output_gradient():
    from test_network import zero_canonical
    net = zero_canonical()
    window = np.zeros((10, 1662))
    y = np.zeros(8)
    y[0] = 1.0
    grads = backward(net, window, y)
    # last dense bias gradient equals the logit gradient p - y
    db_out = grads[-1]
    expected = np.full(8, 0.125)
    expected[0] -= 1.0
    assert np.allclose(db_out, expected, atol=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_gradient_check_tiny_instances(seed):
    rng = np.random.default_rng(9000 + seed)
    net = make_tiny_net(seed=seed, input_dim=int(rng.integers(2, 5)),
                        units=int(rng.integers(2, 4)),
                        num_classes=int(rng.integers(2, 4)))
    steps = int(rng.integers(1, 4))
    window = rng.normal(0, 1, (steps, net.input_dim))
    target = np.zeros(net.num_classes)
    target[rng.integers(net.num_classes)] = 1.0
    analytic = backward(net, window, target)
    numeric = finite_difference_grads(net, window, target)
    assert max_relative_error(analytic, numeric) < 1e-4


def test_lstm1_kernel_gradient_nonzero():
    net = make_tiny_net(seed=1)
    rng = np.random.default_rng(2)
    window = rng.normal(0, 1, (3, 4))
    target = np.array([1.0, 0.0])
    grads = backward(net, window, target)
    assert np.any(np.abs(grads[0]) > 1e-8)


def test_adam_first_step_magnitude():
    net = make_tiny_net(seed=5)
    config = TrainConfig(epochs=1, learning_rate=0.01)
    state = AdamState.for_network(net)
    before = [a.copy() for a in net.param_arrays()]
    grads = [np.full_like(a, 0.5) for a in net.param_arrays()]
    adam_step(net, grads, state, config)
    assert state.t == 1
    for b, a in zip(before, net.param_arrays()):
        delta = a - b
        # bias-corrected first step is ~ -lr * sign(g)
        assert np.allclose(delta, -config.learning_rate, rtol=1e-3)


def test_adam_zero_gradient_identity():
    net = make_tiny_net(seed=6)
    config = TrainConfig(epochs=1)
    state = AdamState.for_network(net)
    before = [a.copy() for a in net.param_arrays()]
    for _ in range(3):
        adam_step(net, [np.zeros_like(a) for a in net.param_arrays()],
                  state, config)
    for b, a in zip(before, net.param_arrays()):
        assert np.array_equal(b, a)
    assert state.t == 3


def test_config_validation():
    with pytest.raises(ConfigError):
        TrainConfig(epochs=0)
    with pytest.raises(ConfigError):
        TrainConfig(learning_rate=0)
    with pytest.raises(ConfigError):
        TrainConfig(test_fraction=1.0)
    with pytest.raises(ConfigError):
        TrainConfig(batch_size=0)


def test_train_deterministic():
    data = gen_synthetic(3, 0.1, seed=12)
    config = TrainConfig(epochs=2, seed=5)
    net_a, curve_a = train(data, config)
    net_b, curve_b = train(data, config)
    for a, b in zip(net_a.param_arrays(), net_b.param_arrays()):
        assert np.array_equal(a, b)
    assert curve_a == curve_b


def test_train_zero_noise_reaches_perfect_fit():
    data = gen_synthetic(2, 0.0, seed=3)
    config = TrainConfig(epochs=120, seed=1)
    net, curve = train(data, config)
    final = curve.records[-1]
    assert final.train_acc == 1.0
    assert final.train_loss < 0.01
    assert all(r.train_loss >= 0 and np.isfinite(r.train_loss)
               for r in curve.records)


def test_curve_epochs_contiguous_and_csv(tmp_path):
    data = gen_synthetic(2, 0.1, seed=3)
    _, curve = train(data, TrainConfig(epochs=3, seed=1))
    assert [r.epoch for r in curve.records] == [1, 2, 3]
    path = tmp_path / "curves.csv"
    curve.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "epoch,train_loss,train_acc,val_loss,val_acc"
    assert len(lines) == 4
    assert lines[1].startswith("1,")
    assert all(len(line.split(",")) == 5 for line in lines[1:])
