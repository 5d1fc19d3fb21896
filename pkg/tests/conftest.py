import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from suryanet.network import (NetworkParams, init_dense_layer,  # noqa: E402
                              init_lstm_layer)


def make_tiny_net(seed: int, input_dim: int = 4, units: int = 3,
                  num_classes: int = 2, dtype=np.float64) -> NetworkParams:
    """A reduced two-LSTM stack for oracle and gradient tests."""
    rng = np.random.default_rng(seed)
    return NetworkParams(
        [init_lstm_layer(rng, input_dim, units, True, dtype),
         init_lstm_layer(rng, units, units, False, dtype)],
        [init_dense_layer(rng, units, units, "relu", dtype),
         init_dense_layer(rng, units, num_classes, "softmax", dtype)])


@pytest.fixture(scope="session")
def replay_fixture(tmp_path_factory):
    from suryanet.fixtures import build_replay_fixture
    out = tmp_path_factory.mktemp("replay")
    build_replay_fixture(out)
    return out
