"""Canonical asana classes.

The index order is normative: it is the order the asanas occur in one
Surya Namaskar cycle, and it fixes confusion-matrix rows, protocol class
ids and dataset directory names.
"""

from dataclasses import dataclass

from .errors import LabelError

CLASS_NAMES: tuple[str, ...] = (
    "Pranamasana",
    "Hasta Uttanasana",
    "Hasta Padasana",
    "Ashwa Sanchalanasana",
    "Dandasana",
    "Ashtanga Namaskara",
    "Bhujangasana",
    "Svanasana",
)

NUM_CLASSES = len(CLASS_NAMES)

_NAME_TO_INDEX = {name: i for i, name in enumerate(CLASS_NAMES)}


@dataclass(frozen=True)
class ClassLabel:
    index: int
    name: str

    def __post_init__(self):
        if not (0 <= self.index < NUM_CLASSES):
            raise LabelError(f"class index {self.index} out of range 0..{NUM_CLASSES - 1}")
        if CLASS_NAMES[self.index] != self.name:
            raise LabelError(f"index {self.index} does not map to name {self.name!r}")

    @classmethod
    def from_index(cls, index: int) -> "ClassLabel":
        if not (0 <= index < NUM_CLASSES):
            raise LabelError(f"class index {index} out of range 0..{NUM_CLASSES - 1}")
        return cls(index, CLASS_NAMES[index])

    @classmethod
    def from_name(cls, name: str) -> "ClassLabel":
        if name not in _NAME_TO_INDEX:
            raise LabelError(f"unknown class name {name!r}")
        return cls(_NAME_TO_INDEX[name], name)
