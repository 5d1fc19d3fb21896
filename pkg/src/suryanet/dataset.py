"""Datasets on disk: the SNK1 sequence file format, directory layout,
stratified splitting, one-hot labels and the synthetic generator.

SNK1 file layout (little-endian):
    magic "SNK1" | u16 version=1 | u8 label | f32 fps | u32 frame_count |
    u16 dim | frame_count*dim f32 values
"""

import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (CorruptFileError, FormatError, InsufficientDataError,
                     InvalidValueError, LabelError, ShapeError,
                     UnknownClassError)
from .frames import FRAME_DIM, WINDOW_SIZE
from .labels import CLASS_NAMES, NUM_CLASSES, ClassLabel

SNK_MAGIC = b"SNK1"
SNK_VERSION = 1
_HEADER = struct.Struct("<4sHBfIH")

DEFAULT_FPS = 60.0
MANIFEST_NAME = "manifest.json"


@dataclass
class LabeledDataset:
    sequences: list[tuple[np.ndarray, ClassLabel]]
    manifest: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.sequences)

    def class_counts(self) -> dict[str, int]:
        counts = {name: 0 for name in CLASS_NAMES}
        for _, label in self.sequences:
            counts[label.name] += 1
        return counts

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Stack to (N, 10, 1662) float32 features and (N,) int labels."""
        x = np.stack([seq for seq, _ in self.sequences]).astype(np.float32, copy=False)
        y = np.array([label.index for _, label in self.sequences], dtype=np.int64)
        return x, y


def _make_manifest(counts: dict[str, int], fps: float, warnings: list[str] | None = None) -> dict:
    return {
        "format_version": SNK_VERSION,
        "classes": list(CLASS_NAMES),
        "counts": counts,
        "fps": fps,
        "warnings": list(warnings or []),
    }


def write_frames(path, frames: np.ndarray, label: ClassLabel, fps: float) -> None:
    """Write an SNK1 file with any frame count (used for replay fixtures)."""
    arr = np.asarray(frames, dtype=np.float32)
    if arr.ndim != 2 or arr.shape[1] != FRAME_DIM:
        raise ShapeError(f"frames must be (T, {FRAME_DIM}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidValueError("frames contain non-finite values")
    header = _HEADER.pack(SNK_MAGIC, SNK_VERSION, label.index, fps,
                          arr.shape[0], arr.shape[1])
    with open(path, "wb") as f:
        f.write(header)
        f.write(arr.astype("<f4").tobytes())


def write_sequence(path, frames: np.ndarray, label: ClassLabel, fps: float) -> None:
    """Write one training sequence; exactly WINDOW_SIZE frames required."""
    arr = np.asarray(frames, dtype=np.float32)
    if arr.shape != (WINDOW_SIZE, FRAME_DIM):
        raise ShapeError(
            f"sequence must be ({WINDOW_SIZE}, {FRAME_DIM}), got {arr.shape}")
    write_frames(path, arr, label, fps)


def read_sequence(path) -> tuple[np.ndarray, ClassLabel, float]:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise CorruptFileError(f"{path}: file shorter than header")
    magic, version, label_index, fps, frame_count, dim = _HEADER.unpack_from(raw)
    if magic != SNK_MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != SNK_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    payload = raw[_HEADER.size:]
    expected = frame_count * dim * 4
    if len(payload) != expected:
        raise CorruptFileError(
            f"{path}: payload is {len(payload)} bytes, header declares {expected}")
    values = np.frombuffer(payload, dtype="<f4").reshape(frame_count, dim)
    if not np.all(np.isfinite(values)):
        raise InvalidValueError(f"{path}: payload contains non-finite values")
    return values.copy(), ClassLabel.from_index(label_index), fps


def load_dataset(root) -> LabeledDataset:
    """Load `<root>/<ClassName>/*.snk`, labels taken from directory names.

    Ordering is deterministic: canonical class order, then lexicographic
    filename order within a class.
    """
    root = Path(root)
    warnings: list[str] = []
    for entry in sorted(p.name for p in root.iterdir() if p.is_dir()):
        if entry not in CLASS_NAMES:
            raise UnknownClassError(f"{root / entry}: not a canonical class name")

    sequences: list[tuple[np.ndarray, ClassLabel]] = []
    fps = DEFAULT_FPS
    for name in CLASS_NAMES:
        class_dir = root / name
        files = sorted(class_dir.glob("*.snk")) if class_dir.is_dir() else []
        if not files:
            warnings.append(f"class {name!r} has no sequences")
            continue
        label = ClassLabel.from_name(name)
        for path in files:
            frames, file_label, fps = read_sequence(path)
            if frames.shape != (WINDOW_SIZE, FRAME_DIM):
                raise CorruptFileError(
                    f"{path}: expected ({WINDOW_SIZE}, {FRAME_DIM}) frames, "
                    f"got {frames.shape}")
            if file_label != label:
                warnings.append(
                    f"{path}: file label {file_label.name!r} overridden by "
                    f"directory {name!r}")
            sequences.append((frames, label))

    counts = {name: 0 for name in CLASS_NAMES}
    for _, label in sequences:
        counts[label.name] += 1
    return LabeledDataset(sequences, _make_manifest(counts, fps, warnings))


def save_dataset(root, dataset: LabeledDataset) -> None:
    """Write the directory layout plus manifest.json."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    fps = dataset.manifest.get("fps", DEFAULT_FPS)
    per_class_index: dict[str, int] = {name: 0 for name in CLASS_NAMES}
    for name in CLASS_NAMES:
        (root / name).mkdir(exist_ok=True)
    for frames, label in dataset.sequences:
        i = per_class_index[label.name]
        per_class_index[label.name] = i + 1
        write_sequence(root / label.name / f"seq_{i:04d}.snk", frames, label, fps)
    manifest = _make_manifest(dataset.class_counts(), fps,
                              dataset.manifest.get("warnings"))
    with open(root / MANIFEST_NAME, "w") as f:
        json.dump(manifest, f, indent=2)


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def split(dataset: LabeledDataset, test_fraction: float, seed: int
          ) -> tuple[LabeledDataset, LabeledDataset]:
    """Stratified split: per class, round(test_fraction * count) sequences
    (half away from zero, at least 1) go to the test set."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError(f"test_fraction must be in (0,1), got {test_fraction}")
    by_class: dict[int, list[int]] = {c: [] for c in range(NUM_CLASSES)}
    for i, (_, label) in enumerate(dataset.sequences):
        by_class[label.index].append(i)

    rng = np.random.default_rng(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for c in range(NUM_CLASSES):
        indices = by_class[c]
        if not indices:
            continue
        if len(indices) < 2:
            raise InsufficientDataError(
                f"class {CLASS_NAMES[c]!r} has {len(indices)} sequence(s), needs >= 2")
        n_test = max(1, _round_half_away(test_fraction * len(indices)))
        n_test = min(n_test, len(indices) - 1)
        order = rng.permutation(len(indices))
        shuffled = [indices[j] for j in order]
        test_idx.extend(shuffled[:n_test])
        train_idx.extend(shuffled[n_test:])

    fps = dataset.manifest.get("fps", DEFAULT_FPS)

    def subset(idx: list[int]) -> LabeledDataset:
        seqs = [dataset.sequences[i] for i in sorted(idx)]
        sub = LabeledDataset(seqs)
        sub.manifest = _make_manifest(sub.class_counts(), fps)
        return sub

    return subset(train_idx), subset(test_idx)


def one_hot(label: ClassLabel, num_classes: int = NUM_CLASSES) -> np.ndarray:
    if label.index >= num_classes:
        raise LabelError(f"label index {label.index} >= num_classes {num_classes}")
    vec = np.zeros(num_classes, dtype=np.float32)
    vec[label.index] = 1.0
    return vec


def class_template(class_index: int, num_frames: int = WINDOW_SIZE) -> np.ndarray:
    """Deterministic smooth per-class trajectory in the 1662-dim space.

    Derived only from the class index, so every seed shares the same
    templates; sequences of one class differ only by added noise.
    """
    rng = np.random.default_rng(0x534E4B00 + class_index)
    offset = rng.uniform(-1.0, 1.0, FRAME_DIM)
    amplitude = rng.uniform(-0.5, 0.5, FRAME_DIM)
    freq = rng.integers(1, 4, FRAME_DIM)
    phase = rng.uniform(0.0, 2 * np.pi, FRAME_DIM)
    t = np.arange(num_frames)[:, None] / num_frames
    traj = offset[None, :] + amplitude[None, :] * np.sin(2 * np.pi * freq[None, :] * t
                                                         + phase[None, :])
    return traj.astype(np.float32)


def gen_synthetic(sequences_per_class: int, noise_scale: float, seed: int
                  ) -> LabeledDataset:
    """Stand-in for recorded data: class templates plus i.i.d. gaussian noise."""
    if sequences_per_class < 1:
        raise ValueError("sequences_per_class must be >= 1")
    if noise_scale < 0:
        raise ValueError("noise_scale must be >= 0")
    rng = np.random.default_rng(seed)
    sequences: list[tuple[np.ndarray, ClassLabel]] = []
    for c in range(NUM_CLASSES):
        template = class_template(c)
        label = ClassLabel.from_index(c)
        for _ in range(sequences_per_class):
            if noise_scale > 0:
                noise = rng.normal(0.0, noise_scale, template.shape)
                seq = (template + noise).astype(np.float32)
            else:
                seq = template.copy()
            sequences.append((seq, label))
    counts = {name: sequences_per_class for name in CLASS_NAMES}
    return LabeledDataset(sequences, _make_manifest(counts, DEFAULT_FPS))
