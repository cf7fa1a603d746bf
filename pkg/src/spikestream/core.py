"""Discrete-time leaky integrate-and-fire simulation.

Potentials, weights, thresholds and leaks are held as exact integers scaled by
a per-network power-of-two ``denominator``.  Every timestep runs the same
sequence for every neuron, synchronously:

1. sum the weights of spikes scheduled to arrive now into ``I``;
2. leak: additive ``V <- V + leak + I``, multiplicative ``V <- V * leak + I``;
3. if ``V >= threshold`` the neuron spikes and ``V <- reset``.

Spikes emitted at ``t`` arrive at ``t + delay`` (``delay >= 1``).

The simulator is batched: a single :class:`SimState` carries ``batch``
independent copies of the network state, so an exhaustive operand sweep runs
as one simulation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
LEAK_MODES = (ADDITIVE, MULTIPLICATIVE)


class NetworkError(ValueError):
    """A network, tap or run configuration is malformed."""


def to_fixed(value, denominator: int) -> int:
    """Return ``value * denominator`` as an int, raising if it is not exact."""
    scaled = Fraction(value) * denominator
    if scaled.denominator != 1:
        raise NetworkError(
            f"{value!r} is not representable with fixed-point denominator {denominator}"
        )
    return int(scaled)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class NeuronConfig:
    """Static parameters of one neuron, in potential units.

    For ``leak_mode="multiplicative"`` the ``leak_value`` is the retained
    fraction per step (0 forgets everything, 1 is a perfect integrator).
    """

    threshold: float = 1
    leak_mode: str = MULTIPLICATIVE
    leak_value: float = 0
    reset_potential: float = 0
    initial_potential: float = 0
    label: str = ""

    def __post_init__(self):
        if self.leak_mode not in LEAK_MODES:
            raise NetworkError(f"unknown leak mode {self.leak_mode!r}")
        if not np.isfinite(float(self.threshold)):
            raise NetworkError("threshold must be finite")
        if self.leak_mode == MULTIPLICATIVE and not 0 <= self.leak_value <= 1:
            raise NetworkError(
                f"multiplicative leak must lie in [0, 1], got {self.leak_value}"
            )

    @classmethod
    def gate(cls, threshold=1, label: str = "") -> "NeuronConfig":
        """A memoryless threshold unit: the potential is cleared every step."""
        return cls(threshold=threshold, leak_mode=MULTIPLICATIVE, leak_value=0, label=label)

    def with_changes(self, **changes) -> "NeuronConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class Synapse:
    pre: int
    post: int
    weight: float
    delay: int = 1

    def __post_init__(self):
        if int(self.delay) != self.delay or self.delay < 1:
            raise NetworkError(f"synapse delay must be an integer >= 1, got {self.delay}")


@dataclass(frozen=True)
class Tap:
    """Binds an external input name to the neuron its spikes are injected into.

    ``weight=None`` injects with the target's threshold, so one injected spike
    produces one tap spike (for a tap at rest).
    """

    neuron: int
    weight: float | None = None


@dataclass(frozen=True)
class Network:
    neurons: tuple[NeuronConfig, ...] = ()
    synapses: tuple[Synapse, ...] = ()
    input_taps: Mapping[str, Tap] = field(default_factory=dict)
    output_taps: Mapping[str, int] = field(default_factory=dict)
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(self, "synapses", tuple(self.synapses))
        taps = {
            name: tap if isinstance(tap, Tap) else Tap(int(tap))
            for name, tap in self.input_taps.items()
        }
        object.__setattr__(self, "input_taps", taps)
        object.__setattr__(self, "output_taps", dict(self.output_taps))
        self._validate()

    def _validate(self):
        n = len(self.neurons)
        if not _is_power_of_two(self.denominator):
            raise NetworkError(f"denominator must be a power of two, got {self.denominator}")
        for syn in self.synapses:
            if not (0 <= syn.pre < n and 0 <= syn.post < n):
                raise NetworkError(f"synapse {syn} references a missing neuron")
        for name, tap in self.input_taps.items():
            if not 0 <= tap.neuron < n:
                raise NetworkError(f"input tap {name!r} references a missing neuron")
        for name, nid in self.output_taps.items():
            if not 0 <= nid < n:
                raise NetworkError(f"output tap {name!r} references a missing neuron")
        # Forces the fixed-point check for every parameter up front.
        self._compiled

    @property
    def size(self) -> int:
        return len(self.neurons)

    def injection_weight(self, name: str):
        tap = self.input_taps[name]
        if tap.weight is None:
            return self.neurons[tap.neuron].threshold
        return tap.weight

    def permuted(self, order: Sequence[int]) -> "Network":
        """Relabel neurons so that new id ``i`` is old neuron ``order[i]``."""
        new_id = {old: new for new, old in enumerate(order)}
        return Network(
            neurons=[self.neurons[old] for old in order],
            synapses=[
                Synapse(new_id[s.pre], new_id[s.post], s.weight, s.delay)
                for s in self.synapses
            ],
            input_taps={k: Tap(new_id[t.neuron], t.weight) for k, t in self.input_taps.items()},
            output_taps={k: new_id[v] for k, v in self.output_taps.items()},
            denominator=self.denominator,
        )

    @cached_property
    def _compiled(self) -> "_Compiled":
        return _Compiled.build(self)


@dataclass
class _Compiled:
    threshold: np.ndarray
    leak_add: np.ndarray
    decay_num: np.ndarray
    is_mult: np.ndarray
    reset: np.ndarray
    initial: np.ndarray
    delays: tuple[int, ...]
    stacked: sp.csr_array
    span: int

    @classmethod
    def build(cls, net: Network) -> "_Compiled":
        den = net.denominator
        n = len(net.neurons)

        def col(attr):
            return np.array([to_fixed(getattr(c, attr), den) for c in net.neurons], dtype=np.int64)

        is_mult = np.array([c.leak_mode == MULTIPLICATIVE for c in net.neurons], dtype=bool)
        leak = col("leak_value")
        delays = tuple(sorted({int(s.delay) for s in net.synapses}))
        row, colidx, data = [], [], []
        slot = {d: i for i, d in enumerate(delays)}
        for s in net.synapses:
            # Row (slot, post), column pre: one product yields every delay group.
            row.append(slot[int(s.delay)] * n + s.post)
            colidx.append(s.pre)
            data.append(to_fixed(s.weight, den))
        stacked = sp.csr_array(
            (np.array(data, dtype=np.int64), (np.array(row, dtype=np.int64), np.array(colidx, dtype=np.int64))),
            shape=(max(len(delays), 1) * n, n),
        )
        for name in net.input_taps:
            to_fixed(net.injection_weight(name), den)
        return cls(
            threshold=col("threshold"),
            leak_add=np.where(is_mult, 0, leak),
            decay_num=np.where(is_mult, leak, 0),
            is_mult=is_mult,
            reset=col("reset_potential"),
            initial=col("initial_potential"),
            delays=delays,
            stacked=stacked,
            span=(max(delays) if delays else 0) + 1,
        )


class SimState:
    """Mutable state of ``batch`` independent runs of one network.

    Arrays are laid out ``(neuron, batch)``.
    """

    def __init__(self, network: Network, batch: int = 1):
        c = network._compiled
        n = network.size
        self.network = network
        self.batch = batch
        self.t = 0
        self.potential = np.repeat(c.initial[:, None], batch, axis=1)
        self.pending = np.zeros((c.span, n, batch), dtype=np.int64)

    def potentials(self) -> np.ndarray:
        """Current potentials in potential units, shape ``(neuron, batch)``."""
        return self.potential / self.network.denominator


def step(network: Network, state: SimState, external: np.ndarray | None = None) -> np.ndarray:
    """Advance ``state`` by one timestep and return the ``(neuron, batch)`` spike mask.

    ``external`` is extra fixed-point input arriving this step, same shape.
    """
    c = network._compiled
    n = network.size
    slot = state.t % c.span
    arriving = state.pending[slot].copy()
    state.pending[slot] = 0
    if external is not None:
        arriving += external

    v = state.potential
    decayed = (v * c.decay_num[:, None]) // network.denominator
    v = np.where(c.is_mult[:, None], decayed, v + c.leak_add[:, None]) + arriving
    spikes = v >= c.threshold[:, None]
    state.potential = np.where(spikes, c.reset[:, None], v)

    if c.delays and spikes.any():
        out = (c.stacked @ spikes.view(np.int8)).reshape(len(c.delays), n, state.batch)
        for i, d in enumerate(c.delays):
            state.pending[(state.t + d) % c.span] += out[i]
    state.t += 1
    return spikes


def run_batch(
    network: Network,
    inputs: Mapping[str, np.ndarray],
    horizon: int,
    batch: int | None = None,
) -> np.ndarray:
    """Simulate a batch of runs; returns a boolean array ``(batch, horizon, neuron)``.

    ``inputs`` maps tap name to a ``(batch, horizon)`` boolean array of external
    spike times.  An external spike at ``t`` reaches its tap neuron at ``t + 1``.
    """
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    unknown = set(inputs) - set(network.input_taps)
    if unknown:
        raise NetworkError(f"unknown input name(s): {sorted(unknown)}")
    arrays = {k: np.asarray(v, dtype=bool) for k, v in inputs.items()}
    for name, arr in arrays.items():
        if arr.ndim != 2 or arr.shape[1] != horizon:
            raise ValueError(f"input {name!r} must have shape (batch, {horizon})")
    if batch is None:
        batch = next(iter(arrays.values())).shape[0] if arrays else 1

    n = network.size
    den = network.denominator
    taps = [
        (network.input_taps[k].neuron, to_fixed(network.injection_weight(k), den), arr)
        for k, arr in arrays.items()
    ]
    state = SimState(network, batch)
    trace = np.zeros((horizon, n, batch), dtype=bool)
    for t in range(horizon):
        external = None
        if t > 0 and taps:
            external = np.zeros((n, batch), dtype=np.int64)
            for nid, weight, arr in taps:
                external[nid] += arr[:, t - 1] * weight
        trace[t] = step(network, state, external)
    return np.moveaxis(trace, 2, 0)


@dataclass(frozen=True)
class Raster:
    """Sorted ``(time, neuron)`` spike events from one run over ``[0, horizon)``."""

    events: tuple[tuple[int, int], ...]
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(sorted((int(t), int(n)) for t, n in self.events)))
        if any(t < 0 or t >= self.horizon for t, _ in self.events):
            raise ValueError("raster event outside [0, horizon)")

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "Raster":
        """Build from a ``(horizon, neuron)`` boolean array."""
        times, ids = np.nonzero(mask)
        return cls(tuple(zip(times.tolist(), ids.tolist())), mask.shape[0])

    def times(self, neuron: int) -> list[int]:
        return [t for t, n in self.events if n == neuron]

    def __len__(self):
        return len(self.events)


def run(network: Network, inputs: Mapping[str, Sequence[int]], horizon: int) -> Raster:
    """Run once with external spike-time lists and return the full raster."""
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    arrays = {}
    for name, times in inputs.items():
        if name not in network.input_taps:
            raise NetworkError(f"unknown input name {name!r}")
        arr = np.zeros((1, horizon), dtype=bool)
        for t in times:
            if not 0 <= t < horizon:
                raise ValueError(f"input spike time {t} outside [0, {horizon})")
            arr[0, t] = True
        arrays[name] = arr
    mask = run_batch(network, arrays, horizon, batch=1)[0]
    return Raster.from_mask(mask)
