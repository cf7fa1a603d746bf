"""Test-only reference semantics, written independently of the simulator."""
import math
from fractions import Fraction

from spikestream.core import ADDITIVE, Network


def reference_run(net: Network, inputs: dict, horizon: int) -> set:
    """Scalar, exact-fraction re-statement of the update rule, one neuron at a time.

    Multiplicative decay rounds down to the network's fixed-point grid.
    """
    den = net.denominator
    v = [Fraction(c.initial_potential) for c in net.neurons]
    arrivals: dict[tuple[int, int], Fraction] = {}
    for name, times in inputs.items():
        nid = net.input_taps[name].neuron
        w = Fraction(net.injection_weight(name))
        for t in times:
            arrivals[(t + 1, nid)] = arrivals.get((t + 1, nid), 0) + w
    events = set()
    for t in range(horizon):
        fired = []
        for i, cfg in enumerate(net.neurons):
            current = arrivals.get((t, i), 0)
            if cfg.leak_mode == ADDITIVE:
                v[i] = v[i] + Fraction(cfg.leak_value) + current
            else:
                v[i] = Fraction(math.floor(v[i] * Fraction(cfg.leak_value) * den), den) + current
            if v[i] >= Fraction(cfg.threshold):
                fired.append(i)
                v[i] = Fraction(cfg.reset_potential)
        for i in fired:
            events.add((t, i))
            for s in net.synapses:
                if s.pre == i:
                    key = (t + s.delay, s.post)
                    arrivals[key] = arrivals.get(key, 0) + Fraction(s.weight)
    return events
