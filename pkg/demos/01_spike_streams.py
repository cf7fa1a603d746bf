"""
Numbers as spike trains
=======================

Integers travel through the network one bit per timestep, least significant
bit first: a spike at step ``offset + i`` means bit ``i`` is set.
"""

from spikestream import BitStream, Raster, decode, encode

# 11 = 0b1011, so bits 0, 1 and 3 spike.
print("11 ->", encode(11, width=4))

# Signed values use two's complement over the same window.
print("-3 ->", encode(-3, width=4, offset=2, signedness="twos_complement"))

# Decoding reads a window of a raster back into an integer.
raster = Raster(((0, 0), (1, 0), (3, 0)), horizon=6)
print("decoded:", decode(raster, neuron=0, offset=0, width=4))

# Holding a stream back by one step doubles the value it represents, as long
# as the window grows by one bit to make room.
late = BitStream(11, 4).shifted(1)
train = Raster(tuple((t, 0) for t in late.spikes()), horizon=8)
print("delayed spikes:", late.spikes(), "read as 5 bits from step 0:", decode(train, 0, 0, 5))
