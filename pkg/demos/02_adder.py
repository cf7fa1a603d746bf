"""
A streaming adder
=================

Three hidden neurons count how many of (a_i, b_i, carry) are set; the one
with threshold 2 is the carry and feeds itself back one step later.  The sum
neuron fires for odd counts.
"""

import numpy as np

from spikestream import circuits

lowered = circuits.build("adder", 4)
print("neurons (without taps):", lowered.neuron_count)
print("schedule:", {name: (s.offset, s.width) for name, s in lowered.schedule.items()})

# One pair at a time...
print("9 + 5 =", lowered.evaluate(A=9, B=5)["S"])

# ...or every pair at once: the batch axis runs all 256 cases in one simulation.
a, b = np.meshgrid(np.arange(16), np.arange(16), indexing="ij")
s = lowered.evaluate_batch({"A": a.ravel(), "B": b.ravel()})["S"]
print("all 4-bit sums correct:", bool((s == (a + b).ravel()).all()))

# The largest operands need the extra output bit.
print("15 + 15 =", lowered.evaluate(A=15, B=15)["S"])

# The full raster shows each neuron's spikes over time.
raster = lowered.raster(A=9, B=5)
for nid, cfg in enumerate(lowered.network.neurons):
    print(f"{cfg.label:>10}: {raster.times(nid)}")
