"""Evaluation: accuracy, confusion matrix and per-class statistics.

Confusion-matrix orientation is fixed: rows are the true class, columns
the predicted class. Degenerate denominators give 0.0, never NaN.
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import LabelError, ShapeError
from .labels import CLASS_NAMES, NUM_CLASSES


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (K, K) int64, rows true / columns predicted
    n: int

    @property
    def num_classes(self) -> int:
        return self.counts.shape[0]


@dataclass
class ClassStats:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float
    degenerate: bool  # some denominator was zero; 0.0 used by convention


def accuracy(y_true, y_pred) -> float:
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape or t.ndim != 1:
        raise ShapeError(f"label lists differ in shape: {t.shape} vs {p.shape}")
    if t.size == 0:
        raise ShapeError("label lists are empty")
    return float(np.mean(t == p))


def confusion(y_true, y_pred, num_classes: int = NUM_CLASSES) -> ConfusionMatrix:
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape or t.ndim != 1:
        raise ShapeError(f"label lists differ in shape: {t.shape} vs {p.shape}")
    if t.size and (t.min() < 0 or t.max() >= num_classes or
                   p.min() < 0 or p.max() >= num_classes):
        raise LabelError(f"labels outside 0..{num_classes - 1}")
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return ConfusionMatrix(counts, int(t.size))


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def per_class_stats(cm: ConfusionMatrix) -> list[ClassStats]:
    stats: list[ClassStats] = []
    col_sums = cm.counts.sum(axis=0)
    row_sums = cm.counts.sum(axis=1)
    for c in range(cm.num_classes):
        tp = int(cm.counts[c, c])
        fp = int(col_sums[c]) - tp
        fn = int(row_sums[c]) - tp
        tn = cm.n - tp - fp - fn
        precision, p_deg = _ratio(tp, tp + fp)
        recall, r_deg = _ratio(tp, tp + fn)
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
            f_deg = False
        else:
            f1, f_deg = 0.0, True
        stats.append(ClassStats(tp, fp, fn, tn, precision, recall, f1,
                                p_deg or r_deg or f_deg))
    return stats


def confusion_to_csv(cm: ConfusionMatrix, path,
                     class_names: tuple[str, ...] = CLASS_NAMES) -> None:
    with open(path, "w") as f:
        f.write("," + ",".join(class_names[:cm.num_classes]) + "\n")
        for c in range(cm.num_classes):
            row = ",".join(str(int(v)) for v in cm.counts[c])
            f.write(f"{class_names[c]},{row}\n")


def stats_to_json(stats: list[ClassStats], path,
                  class_names: tuple[str, ...] = CLASS_NAMES) -> None:
    payload = {class_names[c]: asdict(s) for c, s in enumerate(stats)}
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
