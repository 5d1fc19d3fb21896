"""Walkthrough: training the stacked LSTM and reading the metrics.

Run: python3 demos/02_train_and_evaluate.py   (~1 minute)
"""

import numpy as np

from suryanet import (TrainConfig, accuracy, confusion, gen_synthetic,
                      param_count, per_class_stats, train)
from suryanet.network import forward_batch

data = gen_synthetic(sequences_per_class=30, noise_scale=0.1, seed=7)
config = TrainConfig(epochs=40, seed=42)  # defaults use 200 epochs
net, curve = train(data, config)

per_layer, total = param_count(net)
print("layer parameter counts:", per_layer, "total:", total)

first, last = curve.records[0], curve.records[-1]
print(f"epoch 1:  loss {first.train_loss:.3f} acc {first.train_acc:.3f}")
print(f"epoch {last.epoch}: loss {last.train_loss:.4f} acc {last.train_acc:.3f} "
      f"val_acc {last.val_acc:.3f}")

x, y_true = data.arrays()
y_pred = np.argmax(forward_batch(net, x), axis=1)
print("whole-dataset accuracy:", accuracy(y_true, y_pred))
cm = confusion(y_true, y_pred)
print("confusion diagonal:", np.diag(cm.counts))
stats = per_class_stats(cm)
print("class 0 precision/recall/f1:",
      stats[0].precision, stats[0].recall, stats[0].f1)
