"""
Saving, drawing and checking circuits
=====================================

A lowered circuit saves to a versioned JSON netlist that reloads to the same
network.  DOT output goes to Graphviz.  Sweeps compare circuits against plain
integer arithmetic.
"""

import tempfile
from pathlib import Path

from spikestream import circuits
from spikestream.netlist import dumps_lowered, loads_lowered, raster_to_csv, to_dot
from spikestream.verify import SweepSpec, sweep

out = Path(tempfile.mkdtemp())

mux = circuits.build("mux", 4)
text = dumps_lowered(mux)
(out / "mux.netlist.json").write_text(text)
print("round trip exact:", dumps_lowered(loads_lowered(text)) == text)

(out / "adder.dot").write_text(to_dot(circuits.build("adder", 4).network, "adder"))
print("wrote", sorted(p.name for p in out.iterdir()), "to", out)

# A raster is a plain CSV of (time, neuron) events.
print(raster_to_csv(mux.raster(A=5, B=2, select=1)))

# Exhaustive at small widths, seeded random sampling beyond.
print(sweep(SweepSpec("subtractor", (1, 2, 3, 4))).to_text())
print(sweep(SweepSpec("subtractor", (10, 12), mode="random", samples=500)).to_text())

# A deliberately broken adder is caught, with the failing raster attached.
broken = sweep(SweepSpec("adder", (3,), mutation="adder.T2.threshold=3"))
print(broken.to_text().split("  raster:")[0])
