"""The brick: a reusable network fragment with named, timed ports.

Timing is relative to a brick's *start*: the source neuron driving an in-port
``p`` emits bit 0 at ``start + port_offsets[p]`` (default 0), and out-port
``q`` emits bit 0 at ``start + latency[q]``.

Some bricks contain timer neurons that must fire at a fixed time relative to
the start.  They are listed in ``clocked``; placing the brick at ``start = s``
lowers their initial potential by ``s * leak_value`` so that every brick can be
built position-independent.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, NamedTuple

from .core import ADDITIVE, NeuronConfig, Synapse
from .streams import UNSIGNED

WidthRule = int | Callable[[Mapping[str, int]], int]


class PortTarget(NamedTuple):
    """One synapse created when a source neuron is wired to an in-port."""

    neuron: int
    weight: float = 1
    delay: int = 1


@dataclass(frozen=True)
class Brick:
    kind: str
    neurons: tuple[NeuronConfig, ...]
    synapses: tuple[Synapse, ...] = ()
    in_ports: Mapping[str, tuple[PortTarget, ...]] = field(default_factory=dict)
    out_ports: Mapping[str, int] = field(default_factory=dict)
    latency: Mapping[str, int] = field(default_factory=dict)
    port_offsets: Mapping[str, int] = field(default_factory=dict)
    widths: Mapping[str, WidthRule] = field(default_factory=dict)
    signedness: Mapping[str, str] = field(default_factory=dict)
    clocked: frozenset[int] = frozenset()
    parts: Mapping[str, int] = field(default_factory=dict)
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "neurons", tuple(self.neurons))
        object.__setattr__(self, "synapses", tuple(self.synapses))
        object.__setattr__(
            self, "in_ports",
            {k: tuple(PortTarget(*t) for t in v) for k, v in self.in_ports.items()},
        )
        object.__setattr__(self, "clocked", frozenset(self.clocked))
        if not self.parts:
            object.__setattr__(self, "parts", {self.kind: 1})
        n = len(self.neurons)
        for port, nid in self.out_ports.items():
            if not 0 <= nid < n:
                raise ValueError(f"{self.kind}: out port {port!r} has no neuron {nid}")
            if port not in self.latency:
                raise ValueError(f"{self.kind}: out port {port!r} has no latency")
        for port, targets in self.in_ports.items():
            if any(not 0 <= t.neuron < n for t in targets):
                raise ValueError(f"{self.kind}: in port {port!r} targets a missing neuron")
        for nid in self.clocked:
            if self.neurons[nid].leak_mode != ADDITIVE:
                raise ValueError(f"{self.kind}: clocked neuron {nid} must use additive leak")

    @property
    def size(self) -> int:
        return len(self.neurons)

    def port_offset(self, port: str) -> int:
        return self.port_offsets.get(port, 0)

    def out_width(self, port: str, in_widths: Mapping[str, int]) -> int:
        rule = self.widths.get(port)
        if rule is None:
            return max(in_widths.values(), default=1)
        if callable(rule):
            return rule(in_widths)
        return rule

    def out_signedness(self, port: str) -> str:
        return self.signedness.get(port, UNSIGNED)

    def find(self, label: str) -> int:
        for i, cfg in enumerate(self.neurons):
            if cfg.label == label:
                return i
        raise KeyError(f"{self.kind} has no neuron labelled {label!r}")

    def anchored_neurons(self, start: int) -> list[NeuronConfig]:
        """Neuron configs with clocked timers shifted for placement at ``start``."""
        out = []
        for i, cfg in enumerate(self.neurons):
            if i in self.clocked and start:
                cfg = replace(cfg, initial_potential=cfg.initial_potential - start * cfg.leak_value)
            out.append(cfg)
        return out

    def mutated(self, label: str, **changes) -> "Brick":
        """Copy with one neuron's parameters changed (used for mutation testing)."""
        idx = self.find(label)
        neurons = list(self.neurons)
        neurons[idx] = replace(neurons[idx], **changes)
        return replace(self, neurons=tuple(neurons))

    def count(self, kind: str) -> int:
        return self.parts.get(kind, 0)


def merge_parts(*bricks: Brick) -> dict[str, int]:
    total: Counter = Counter()
    for b in bricks:
        total.update(b.parts)
    return dict(total)
