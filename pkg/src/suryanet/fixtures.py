"""Deterministic replay fixtures shared by the test suites and the
frontend client.

`build_replay_fixture(out_dir)` writes:
    model.snkm    — seeded canonical network
    frames.snk    — 120 landmark frames (SNK1 reused as replay input)
    golden.jsonl  — the prediction/cycle stream the engine produces for it
"""

import json
import sys
from pathlib import Path

import numpy as np

from .dataset import class_template, read_sequence, write_frames
from .engine import DEFAULT_STABILITY_N, DEFAULT_TAU, replay
from .labels import ClassLabel
from .model_io import load_model, save_model
from .network import NetworkParams, init_params

FIXTURE_SEED = 11
FIXTURE_FRAMES = 120
FIXTURE_FPS = 60.0


def fixture_frames(num_frames: int = FIXTURE_FRAMES,
                   seed: int = FIXTURE_SEED) -> np.ndarray:
    """Frames walking through a few class trajectories with mild noise."""
    rng = np.random.default_rng(seed)
    frames = np.empty((num_frames, class_template(0).shape[1]), dtype=np.float32)
    for t in range(num_frames):
        class_index = (t // 30) % 8
        template = class_template(class_index)
        frames[t] = template[t % template.shape[0]]
    frames += rng.normal(0.0, 0.05, frames.shape).astype(np.float32)
    return frames


def golden_records(net: NetworkParams, frames: np.ndarray,
                   tau: float = DEFAULT_TAU,
                   stability_n: int = DEFAULT_STABILITY_N) -> list[dict]:
    records = []
    for prediction, event in replay(net, frames, tau=tau,
                                    stability_n=stability_n, fps=FIXTURE_FPS):
        if prediction is None:
            continue
        record = {
            "type": "prediction",
            "timestamp_ms": prediction.timestamp_ms,
            "class_index": prediction.top_class.index,
            "stable": prediction.stable,
            "probabilities": [float(np.float32(p))
                              for p in prediction.probabilities],
        }
        records.append(record)
        if event is not None:
            records.append({
                "type": "cycle",
                "event_code": event.code,
                "step_index": event.step_index,
                "expected_class": event.expected.index,
                "observed_class": event.observed.index,
            })
    return records


def build_replay_fixture(out_dir, seed: int = FIXTURE_SEED) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    net = init_params(seed)
    save_model(net, out / "model.snkm")
    frames = fixture_frames(seed=seed)
    write_frames(out / "frames.snk", frames, ClassLabel.from_index(0), FIXTURE_FPS)
    records = golden_records(net, frames)
    with open(out / "golden.jsonl", "w") as f:
        for record in records:
            f.write(json.dumps(record) + "\n")
    return {"model": str(out / "model.snkm"), "frames": str(out / "frames.snk"),
            "golden": str(out / "golden.jsonl"), "num_frames": len(frames)}


def load_replay_fixture(fixture_dir) -> tuple[NetworkParams, np.ndarray, list[dict]]:
    fixture_dir = Path(fixture_dir)
    net = load_model(fixture_dir / "model.snkm")
    frames, _, _ = read_sequence(fixture_dir / "frames.snk")
    with open(fixture_dir / "golden.jsonl") as f:
        records = [json.loads(line) for line in f if line.strip()]
    return net, frames, records


if __name__ == "__main__":
    info = build_replay_fixture(sys.argv[1] if len(sys.argv) > 1 else "fixture")
    print(json.dumps(info))
