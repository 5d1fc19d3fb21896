"""Walkthrough: streaming inference, stability smoothing and the
12-step cycle tracker.

Run: python3 demos/03_streaming_and_cycle.py
"""

from suryanet import CycleTracker, advance_cycle, init_params
from suryanet.engine import CYCLE_SEQUENCE, replay
from suryanet.fixtures import fixture_frames
from suryanet.labels import CLASS_NAMES, ClassLabel

# A seeded (untrained) network and a 120-frame landmark fixture: the
# engine emits one prediction per frame once 10 frames have arrived.
net = init_params(11)
frames = fixture_frames()
results = replay(net, frames)
predictions = [p for p, _ in results if p is not None]
print(f"{len(frames)} frames -> {len(predictions)} predictions")
p = predictions[0]
print(f"first prediction @ {p.timestamp_ms} ms: {p.top_class.name} "
      f"p={p.probabilities[p.top_class.index]:.2f} stable={p.stable}")

# The cycle tracker walks the 12-step sequence from stable classes.
print("cycle order:", [CLASS_NAMES[c] for c in CYCLE_SEQUENCE])
tracker = CycleTracker()
for c in CYCLE_SEQUENCE:
    event = advance_cycle(tracker, ClassLabel.from_index(c))
print("completed cycles after one pass:", tracker.completed_cycles)

wrong = advance_cycle(tracker, ClassLabel.from_index(5))
print(f"out-of-order feedback: expected {wrong.expected.name}, "
      f"observed {wrong.observed.name}")
