"""Composition of bricks into larger circuits.

A :class:`Scaffold` is a brick-level DAG.  ``lower()`` flattens it into one
:class:`~spikestream.core.Network` with input tap neurons and a timing
schedule; ``to_brick()`` flattens it into a composite :class:`Brick` so it can
be reused inside another scaffold.

Placement rules:

* a brick with at least one driven in-port starts as early as its latest
  operand allows;
* a brick without driven in-ports (a timer, an external input) is a free
  source and is placed as late as its consumers allow;
* any remaining slack on an edge becomes an inserted delay brick, so bit ``i``
  of every operand reaches each brick on the same step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .brick import Brick, PortTarget, merge_parts
from .core import Network, NeuronConfig, Raster, Synapse, Tap, run_batch
from .streams import SIGNEDNESS, UNSIGNED, decode_batch, encode_batch

TAP_LATENCY = 1


class ScaffoldError(ValueError):
    pass


@dataclass(frozen=True)
class PortSchedule:
    """Where a port's stream lives in a lowered network."""

    neuron: int
    offset: int
    width: int
    signedness: str = UNSIGNED


@dataclass(frozen=True)
class LoweredNetwork:
    network: Network
    inputs: Mapping[str, PortSchedule]
    outputs: Mapping[str, PortSchedule]
    starts: Mapping[str, int] = field(default_factory=dict)
    arrivals: Mapping[tuple[str, str], int] = field(default_factory=dict)
    spans: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    parts: Mapping[str, int] = field(default_factory=dict)

    @property
    def schedule(self) -> dict[str, PortSchedule]:
        return {**self.inputs, **self.outputs}

    @property
    def neuron_count(self) -> int:
        """Neurons excluding the input taps."""
        return self.network.size - len(self.inputs)

    def default_horizon(self) -> int:
        ends = [s.offset + s.width for s in self.schedule.values()]
        return max(ends, default=0) + 1

    def encode(self, operands: Mapping[str, np.ndarray], horizon: int) -> dict[str, np.ndarray]:
        missing = set(self.inputs) - set(operands)
        if missing:
            raise ScaffoldError(f"missing operands: {sorted(missing)}")
        return {
            name: encode_batch(np.atleast_1d(operands[name]), s.width, s.offset, horizon, s.signedness)
            for name, s in self.inputs.items()
        }

    def simulate(self, operands: Mapping[str, np.ndarray], horizon: int | None = None) -> np.ndarray:
        """Batched run; returns the ``(batch, horizon, neuron)`` spike mask."""
        horizon = horizon or self.default_horizon()
        arrays = self.encode(operands, horizon)
        batch = len(next(iter(arrays.values()))) if arrays else 1
        return run_batch(self.network, arrays, horizon, batch=batch)

    def evaluate_batch(self, operands: Mapping[str, np.ndarray], horizon: int | None = None) -> dict[str, np.ndarray]:
        trace = self.simulate(operands, horizon)
        return {
            name: decode_batch(trace[:, :, s.neuron], s.offset, s.width, s.signedness)
            for name, s in self.outputs.items()
        }

    def evaluate(self, **operands: int) -> dict[str, int]:
        out = self.evaluate_batch({k: np.array([v]) for k, v in operands.items()})
        return {k: int(v[0]) for k, v in out.items()}

    def raster(self, horizon: int | None = None, **operands: int) -> Raster:
        trace = self.simulate({k: np.array([v]) for k, v in operands.items()}, horizon)
        return Raster.from_mask(trace[0])


@dataclass
class _Placement:
    tau: dict[str, int]
    slack: dict[tuple[str, str], int]
    widths: dict[tuple[str, str | None], int]
    signs: dict[tuple[str, str | None], str]
    delays: dict[tuple[str, str | None, int], str]


class Scaffold:
    """A mutable composition of named bricks and external ports."""

    def __init__(self, name: str = "scaffold", max_delay: int | None = None):
        self.name = name
        self.max_delay = max_delay
        self.inputs: dict[str, tuple[int, str]] = {}
        self.bricks: dict[str, Brick] = {}
        self.drivers: dict[tuple[str, str], tuple[str, str | None]] = {}
        self.outputs: dict[str, tuple[str, str]] = {}

    # -- construction ---------------------------------------------------

    def add_input(self, name: str, width: int, signedness: str = UNSIGNED) -> "Scaffold":
        self._check_new_name(name)
        if width < 1:
            raise ScaffoldError(f"input {name!r} needs a positive width")
        if signedness not in SIGNEDNESS:
            raise ScaffoldError(f"unknown signedness {signedness!r}")
        self.inputs[name] = (width, signedness)
        return self

    def add_brick(self, name: str, brick: Brick) -> "Scaffold":
        self._check_new_name(name)
        if "." in name:
            raise ScaffoldError(f"brick name {name!r} may not contain '.'")
        self.bricks[name] = brick
        return self

    def connect(self, source: str, target: str) -> "Scaffold":
        """Wire ``"brick.port"`` or an input name to ``"brick.port"``."""
        src = self._resolve_source(source)
        dst_brick, dst_port = self._split(target)
        brick = self.bricks.get(dst_brick)
        if brick is None:
            raise ScaffoldError(f"unknown brick {dst_brick!r}")
        if dst_port not in brick.in_ports:
            raise ScaffoldError(f"{dst_brick!r} has no in-port {dst_port!r}")
        if (dst_brick, dst_port) in self.drivers:
            raise ScaffoldError(f"{target} is already driven")
        if src[0] in self.bricks and self._reaches(dst_brick, src[0]):
            raise ScaffoldError(f"connecting {source} -> {target} would close a brick-level cycle")
        self.drivers[(dst_brick, dst_port)] = src
        return self

    def add_output(self, name: str, source: str) -> "Scaffold":
        if name in self.outputs:
            raise ScaffoldError(f"output {name!r} already bound")
        brick, port = self._split(source)
        if brick not in self.bricks or port not in self.bricks[brick].out_ports:
            raise ScaffoldError(f"unknown out-port {source!r}")
        self.outputs[name] = (brick, port)
        return self

    def _check_new_name(self, name: str):
        if name in self.inputs or name in self.bricks:
            raise ScaffoldError(f"name {name!r} already used")

    @staticmethod
    def _split(ref: str) -> tuple[str, str]:
        if "." not in ref:
            raise ScaffoldError(f"expected 'brick.port', got {ref!r}")
        brick, port = ref.split(".", 1)
        return brick, port

    def _resolve_source(self, ref: str) -> tuple[str, str | None]:
        if ref in self.inputs:
            return ref, None
        brick, port = self._split(ref)
        if brick not in self.bricks:
            raise ScaffoldError(f"unknown brick {brick!r}")
        if port not in self.bricks[brick].out_ports:
            raise ScaffoldError(f"{brick!r} has no out-port {port!r}")
        return brick, port

    def _successors(self, node: str) -> list[str]:
        return [dst for (dst, _), (src, _) in self.drivers.items() if src == node]

    def _reaches(self, start: str, goal: str) -> bool:
        seen, stack = set(), [start]
        while stack:
            node = stack.pop()
            if node == goal:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self._successors(node))
        return False

    def _topo_bricks(self) -> list[str]:
        indeg = {b: 0 for b in self.bricks}
        for (dst, _), (src, _) in self.drivers.items():
            if src in self.bricks:
                indeg[dst] += 1
        ready = [b for b in self.bricks if indeg[b] == 0]
        order = []
        while ready:
            b = ready.pop(0)
            order.append(b)
            for dst in self._successors(b):
                indeg[dst] -= 1
                if indeg[dst] == 0:
                    ready.append(dst)
        return order

    # -- placement ------------------------------------------------------

    def _source_offset(self, tau, node: str, port: str | None, tap_latency: int) -> int:
        if port is None:
            return tau[node] + tap_latency
        return tau[node] + self.bricks[node].latency[port]

    def _place(self, tap_latency: int) -> _Placement:
        order = self._topo_bricks()
        tau: dict[str, int] = {name: 0 for name in self.inputs}
        sources = list(self.inputs)
        for b in order:
            brick = self.bricks[b]
            needs = [
                self._source_offset(tau, *self.drivers[(b, port)], tap_latency) - brick.port_offset(port)
                for port in brick.in_ports if (b, port) in self.drivers
            ]
            if needs:
                tau[b] = max(needs)
            else:
                tau[b] = 0
                sources.append(b)

        for s in sources:
            pulls = []
            for (dst, dport), (src, sport) in self.drivers.items():
                if src == s:
                    lat = tap_latency if sport is None else self.bricks[s].latency[sport]
                    pulls.append(tau[dst] + self.bricks[dst].port_offset(dport) - lat)
            if pulls:
                tau[s] = min(pulls)
        if tau:
            low = min(tau.values())
            tau = {k: v - low for k, v in tau.items()}

        slack = {}
        delays: dict[tuple[str, str | None, int], str] = {}
        for (dst, dport), (src, sport) in self.drivers.items():
            arrive = self._source_offset(tau, src, sport, tap_latency)
            gap = tau[dst] + self.bricks[dst].port_offset(dport) - arrive
            if gap < 0:
                raise ScaffoldError(f"internal placement error on {src}->{dst}.{dport}")
            slack[(dst, dport)] = gap
            if gap and (src, sport, gap) not in delays:
                delays[(src, sport, gap)] = f"delay{len(delays)}"

        widths: dict[tuple[str, str | None], int] = {}
        signs: dict[tuple[str, str | None], str] = {}
        for name, (w, s) in self.inputs.items():
            widths[(name, None)] = w
            signs[(name, None)] = s
        for b in order:
            brick = self.bricks[b]
            in_w = {
                port: widths[self.drivers[(b, port)]]
                for port in brick.in_ports if (b, port) in self.drivers
            }
            for port in brick.out_ports:
                widths[(b, port)] = brick.out_width(port, in_w)
                signs[(b, port)] = brick.out_signedness(port)
        return _Placement(tau, slack, widths, signs, delays)

    # -- flattening -----------------------------------------------------

    def _flatten(self, top: bool):
        from .bricks import build_delay

        tap_latency = TAP_LATENCY if top else 0
        pl = self._place(tap_latency)
        tau = pl.tau
        ref = min((tau[i] for i in self.inputs), default=0) if not top else 0

        neurons: list[NeuronConfig] = []
        synapses: list[Synapse] = []
        clocked: list[int] = []
        base: dict[str, int] = {}
        spans: dict[str, tuple[int, int]] = {}
        taps: dict[str, Tap] = {}
        in_targets: dict[str, list[PortTarget]] = {name: [] for name in self.inputs}
        denominator = max([b.denominator for b in self.bricks.values()] + [1])

        if top:
            for name in self.inputs:
                taps[name] = Tap(len(neurons))
                neurons.append(NeuronConfig.gate(1, label=f"tap:{name}"))

        def place(name: str, brick: Brick, start: int):
            base[name] = len(neurons)
            spans[name] = (len(neurons), brick.size)
            for i, cfg in enumerate(brick.anchored_neurons(start - ref)):
                neurons.append(cfg.with_changes(label=f"{name}.{cfg.label}" if cfg.label else name))
                if i in brick.clocked:
                    clocked.append(base[name] + i)
            for syn in brick.synapses:
                synapses.append(Synapse(syn.pre + base[name], syn.post + base[name], syn.weight, syn.delay))

        for name, brick in self.bricks.items():
            place(name, brick, tau[name])

        delay_bricks = {}
        for (src, sport, gap), dname in pl.delays.items():
            brick = build_delay(gap, self.max_delay)
            delay_bricks[dname] = brick
            place(dname, brick, self._source_offset(tau, src, sport, tap_latency))

        def wire(src: str, sport: str | None, brick_name: str, brick: Brick, port: str):
            for t in brick.in_ports[port]:
                post = base[brick_name] + t.neuron
                if sport is None and not top:
                    in_targets[src].append(PortTarget(post, t.weight, t.delay))
                else:
                    pre = taps[src].neuron if sport is None else base[src] + self.bricks[src].out_ports[sport]
                    synapses.append(Synapse(pre, post, t.weight, t.delay))

        for (src, sport, gap), dname in pl.delays.items():
            wire(src, sport, dname, delay_bricks[dname], "X")
        for (dst, dport), (src, sport) in self.drivers.items():
            gap = pl.slack[(dst, dport)]
            if gap:
                dname = pl.delays[(src, sport, gap)]
                d = delay_bricks[dname]
                for t in self.bricks[dst].in_ports[dport]:
                    synapses.append(Synapse(base[dname] + d.out_ports["Y"], base[dst] + t.neuron, t.weight, t.delay))
            else:
                wire(src, sport, dst, self.bricks[dst], dport)

        outputs = {}
        for name, (b, port) in self.outputs.items():
            outputs[name] = PortSchedule(
                neuron=base[b] + self.bricks[b].out_ports[port],
                offset=self._source_offset(tau, b, port, tap_latency) - ref,
                width=pl.widths[(b, port)],
                signedness=pl.signs[(b, port)],
            )
        parts = merge_parts(*self.bricks.values(), *delay_bricks.values())
        arrivals = {
            (dst, dport): self._source_offset(tau, *self.drivers[(dst, dport)], tap_latency)
            + pl.slack[(dst, dport)] - tau[dst]
            for (dst, dport) in self.drivers
        }
        starts = {**{b: tau[b] - ref for b in self.bricks},
                  **{d: tau[s] - ref for (s, _, _), d in pl.delays.items()}}
        return dict(
            neurons=neurons, synapses=synapses, clocked=clocked, taps=taps,
            in_targets=in_targets, outputs=outputs, tau=tau, ref=ref, parts=parts,
            denominator=denominator, spans=spans, arrivals=arrivals, starts=starts,
        )

    def lower(self) -> LoweredNetwork:
        """Flatten into a runnable network with taps and a port schedule."""
        f = self._flatten(top=True)
        for nid in f["clocked"]:
            cfg = f["neurons"][nid]
            # A timer anchored before t=0 would fire at t=0 instead of on time.
            if cfg.initial_potential + cfg.leak_value > cfg.threshold:
                raise ScaffoldError(f"timer {cfg.label!r} is anchored before t=0")
        net = Network(
            neurons=f["neurons"], synapses=f["synapses"], input_taps=f["taps"],
            output_taps={k: s.neuron for k, s in f["outputs"].items()},
            denominator=f["denominator"],
        )
        inputs = {
            name: PortSchedule(f["taps"][name].neuron, f["tau"][name], w, s)
            for name, (w, s) in self.inputs.items()
        }
        return LoweredNetwork(
            network=net, inputs=inputs, outputs=f["outputs"], starts=f["starts"],
            arrivals=f["arrivals"], spans=f["spans"], parts=f["parts"],
        )

    def to_brick(self, kind: str | None = None) -> Brick:
        """Flatten into a reusable composite brick (external inputs become in-ports)."""
        f = self._flatten(top=False)
        return Brick(
            kind=kind or self.name,
            neurons=tuple(f["neurons"]),
            synapses=tuple(f["synapses"]),
            in_ports={k: tuple(v) for k, v in f["in_targets"].items()},
            out_ports={k: s.neuron for k, s in f["outputs"].items()},
            latency={k: s.offset for k, s in f["outputs"].items()},
            port_offsets={k: f["tau"][k] - f["ref"] for k in self.inputs},
            widths={k: s.width for k, s in f["outputs"].items()},
            signedness={k: s.signedness for k, s in f["outputs"].items()},
            clocked=frozenset(f["clocked"]),
            parts=f["parts"],
            denominator=f["denominator"],
        )

    # -- accounting -----------------------------------------------------

    def neuron_counts(self) -> dict[str, int]:
        """Neurons per brick instance, including inserted delay bricks (taps excluded)."""
        f = self._flatten(top=True)
        return {name: size for name, (_, size) in f["spans"].items()}

    def neuron_count(self) -> int:
        return sum(self.neuron_counts().values())

    def latency(self, output: str) -> int:
        """Steps from the earliest input's bit 0 to ``output``'s bit 0."""
        return self.to_brick().latency[output]
