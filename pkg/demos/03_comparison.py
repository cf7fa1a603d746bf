"""
Comparing two streams
=====================

A > B exactly when A + inv(B) carries out of the top bit.  The arithmetic
comparator builds that from a NOT, an adder and a carry check.  The decay
comparator gets the same verdict from one neuron whose potential halves every
step, so early (low) bits count for less than late (high) bits.
"""

from spikestream import bricks, circuits

for a, b in [(5, 3), (3, 5), (6, 6)]:
    arith = circuits.build("inequality", 3).evaluate(A=a, B=b)["gt"]
    decay = circuits.build("inequality", 3, variant="decay").evaluate(A=a, B=b)["gt"]
    print(f"{a} > {b}: arithmetic={arith} decay={decay}")

print("arithmetic comparator neurons:", bricks.build_inequality(3).size)
print("decay comparator neurons:", bricks.build_inequality(3, "decay").size)

# A comparator driving a mux gives max and min.  Ties pass A through, which
# is equal to B anyway.
mx = circuits.build("minmax", 4, mode="max")
mn = circuits.build("minmax", 4, mode="min")
for a, b in [(9, 4), (4, 9), (7, 7)]:
    print(f"max({a}, {b}) = {mx.evaluate(A=a, B=b)['out']}, min = {mn.evaluate(A=a, B=b)['out']}")

# The mux copies of A and B are held back until the verdict is known.
print("minmax brick starts:", mx.starts, "total delay relays:", mx.parts.get("delay"))
