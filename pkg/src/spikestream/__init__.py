"""Spiking-neuron streaming binary arithmetic.

Numbers travel as little-endian spike trains (bit i at step i), and each
arithmetic operation is a small network of integrate-and-fire neurons.
"""
from .brick import Brick, PortTarget
from .bricks import (
    build_adder,
    build_carry_check,
    build_delay,
    build_inequality,
    build_minmax,
    build_mux,
    build_not,
    build_scalar_mult,
    build_shift,
    build_subtractor,
    build_timer,
    build_variable_mult,
)
from .core import (
    Network,
    NetworkError,
    NeuronConfig,
    Raster,
    SimState,
    Synapse,
    Tap,
    run,
    run_batch,
    step,
)
from .scaffold import LoweredNetwork, PortSchedule, Scaffold, ScaffoldError
from .streams import BitStream, decode, encode, extend

__version__ = "0.1.0"
