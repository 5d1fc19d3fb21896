"""Walkthrough: synthetic data, the SNK1 on-disk format, and splitting.

Run: python3 demos/01_dataset_and_split.py
"""

import tempfile
from pathlib import Path

from suryanet import gen_synthetic, load_dataset, one_hot, split
from suryanet.dataset import save_dataset
from suryanet.labels import CLASS_NAMES, ClassLabel

# Each sequence is 10 frames of 1662 holistic-landmark values. The
# generator draws a smooth per-class trajectory and adds gaussian noise.
data = gen_synthetic(sequences_per_class=30, noise_scale=0.1, seed=7)
print(f"{len(data)} sequences, counts: {data.class_counts()}")

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp) / "dataset"
    save_dataset(root, data)
    print("on disk:", sorted(p.name for p in root.iterdir())[:4], "...")
    reloaded = load_dataset(root)
    print("reloaded", len(reloaded), "sequences; manifest fps =",
          reloaded.manifest["fps"])

# Stratified split: round(0.25 * 30) = 8 test sequences per class.
train_set, test_set = split(data, test_fraction=0.25, seed=1)
print("train per class:", train_set.class_counts()[CLASS_NAMES[0]])
print("test per class: ", test_set.class_counts()[CLASS_NAMES[0]])

print("one-hot for Dandasana:", one_hot(ClassLabel.from_name("Dandasana")))
