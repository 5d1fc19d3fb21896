"""Real-time Surya Namaskar pose-sequence classification.

A stacked-LSTM classifier over sliding windows of 10 holistic-landmark
frames (1662 values each), with dataset tooling, full-BPTT training,
evaluation metrics, and a streaming inference engine that tracks the
12-step asana cycle.
"""

from .dataset import (LabeledDataset, gen_synthetic, load_dataset, one_hot,
                      read_sequence, split, write_sequence)
from .engine import (CycleEvent, CycleTracker, EngineServer, Prediction,
                     SessionState, advance_cycle, ingest_frame, replay,
                     serve_stdio)
from .frames import (FRAME_DIM, WINDOW_SIZE, KeypointFrame, SequenceWindow,
                     assemble_frame, window_push)
from .labels import CLASS_NAMES, NUM_CLASSES, ClassLabel
from .metrics import accuracy, confusion, per_class_stats
from .model_io import load_model, save_model
from .network import (DenseLayerParams, LstmLayerParams, NetworkParams,
                      forward, init_params, is_canonical, lstm_cell_step,
                      param_count)
from .training import (AdamState, LearningCurve, TrainConfig, adam_step,
                       backward, cross_entropy, train)

__all__ = [
    "LabeledDataset", "gen_synthetic", "load_dataset", "one_hot",
    "read_sequence", "split", "write_sequence",
    "CycleEvent", "CycleTracker", "EngineServer", "Prediction",
    "SessionState", "advance_cycle", "ingest_frame", "replay", "serve_stdio",
    "FRAME_DIM", "WINDOW_SIZE", "KeypointFrame", "SequenceWindow",
    "assemble_frame", "window_push",
    "CLASS_NAMES", "NUM_CLASSES", "ClassLabel",
    "accuracy", "confusion", "per_class_stats",
    "load_model", "save_model",
    "DenseLayerParams", "LstmLayerParams", "NetworkParams", "forward",
    "init_params", "is_canonical", "lstm_cell_step", "param_count",
    "AdamState", "LearningCurve", "TrainConfig", "adam_step", "backward",
    "cross_entropy", "train",
]

__version__ = "0.1.0"
