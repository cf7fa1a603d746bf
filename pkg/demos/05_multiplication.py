"""
Multiplying
===========

By a constant: one shifted copy of X per set bit of the constant, summed by
a chain of adders.  Powers of two need no adder at all.

By a variable: each bit of Y is latched into a self-exciting neuron once Y
has streamed in; latch i then lets through a copy of X held back by i steps,
and the partial products are summed.
"""

import numpy as np

from spikestream import bricks, circuits

for a in (0, 1, 4, 5, 7, 13):
    brick = bricks.build_scalar_mult(a, 4)
    y = circuits.build("scalar_mult", 4, a=a).evaluate(X=11)["Y"]
    print(f"{a:2d} * 11 = {y:3d}   adders={brick.count('adder')} shifts={brick.count('shift')}")

k = 4
lowered = circuits.build("variable_mult", k)
x, y = np.meshgrid(np.arange(16), np.arange(16), indexing="ij")
p = lowered.evaluate_batch({"X": x.ravel(), "Y": y.ravel()})["P"]
print("all 4x4-bit products correct:", bool((p == (x * y).ravel()).all()))
print("neurons:", lowered.neuron_count, "output window:", lowered.outputs["P"])
