"""Builders for the streaming arithmetic bricks.

Every builder returns an immutable :class:`~spikestream.brick.Brick`.  The
primitive bricks (adder, NOT, carry check, mux, delay, shift, timer) are wired
by hand; the composite ones (inequality, min/max, subtractor, multipliers) are
assembled with a :class:`~spikestream.scaffold.Scaffold` and flattened.
"""
from __future__ import annotations

import math
from dataclasses import replace

from .brick import Brick, PortTarget
from .core import ADDITIVE, MULTIPLICATIVE, NeuronConfig, Synapse
from .scaffold import Scaffold
from .streams import TWOS_COMPLEMENT

# Self-inhibition that keeps a fired timer below threshold for 2**20 steps.
ONE_SHOT_INHIBITION = 2 ** 20

LEAK_MODELS = (ADDITIVE, MULTIPLICATIVE)
INEQUALITY_VARIANTS = ("arithmetic", "decay")


def _grow(extra: int):
    return lambda widths: max(widths.values(), default=1) + extra


def _timer(fire_at: int, label: str) -> NeuronConfig:
    """Additive +1 ramp from 0 that crosses threshold at step ``fire_at``."""
    if fire_at < 0:
        raise ValueError("timer must fire at a non-negative step")
    return NeuronConfig(threshold=fire_at + 1, leak_mode=ADDITIVE, leak_value=1, label=label)


def _one_shot(nid: int) -> Synapse:
    return Synapse(nid, nid, -ONE_SHOT_INHIBITION, 1)


def build_adder() -> Brick:
    """Streaming binary adder: A, B -> S (sum) and C (carry stream).

    Hidden units T1, T2, T3 fire when at least 1, 2, 3 of {a_i, b_i, carry}
    are set.  T2 is the carry and feeds back into all three one step later.
    S = T1 - T2 + T3 fires for odd counts.  Bit i of S appears two steps after
    bit i of the operands; C carries the carry out of bit i one step after it.
    """
    neurons = (
        NeuronConfig.gate(1, "T1"),
        NeuronConfig.gate(2, "T2"),
        NeuronConfig.gate(3, "T3"),
        NeuronConfig.gate(1, "S"),
    )
    synapses = (
        Synapse(1, 0, 1), Synapse(1, 1, 1), Synapse(1, 2, 1),
        Synapse(0, 3, 1), Synapse(1, 3, -1), Synapse(2, 3, 1),
    )
    hidden = tuple(PortTarget(i, 1, 1) for i in range(3))
    return Brick(
        kind="adder",
        neurons=neurons,
        synapses=synapses,
        in_ports={"A": hidden, "B": hidden},
        out_ports={"S": 3, "C": 1},
        latency={"S": 2, "C": 1},
        widths={"S": _grow(1), "C": _grow(0)},
    )


def build_not(leak_model: str = ADDITIVE) -> Brick:
    """Bitwise complement X -> notX with latency 1.

    The output free-runs (it spikes on every step without input), so the
    complement is only meaningful inside the operand's window.
    """
    if leak_model == ADDITIVE:
        neuron = NeuronConfig(threshold=1, leak_mode=ADDITIVE, leak_value=1, label="not")
        return Brick(
            kind="not",
            neurons=(neuron,),
            in_ports={"X": (PortTarget(0, -1, 1),)},
            out_ports={"notX": 0},
            latency={"notX": 1},
        )
    if leak_model == MULTIPLICATIVE:
        # No positive leak available, so a self-sustaining spiker supplies the drive.
        const = NeuronConfig(threshold=1, leak_mode=MULTIPLICATIVE, leak_value=1,
                             initial_potential=1, label="const")
        return Brick(
            kind="not",
            neurons=(const, NeuronConfig.gate(1, "not")),
            synapses=(Synapse(0, 0, 1), Synapse(0, 1, 1)),
            in_ports={"X": (PortTarget(1, -1, 1),)},
            out_ports={"notX": 1},
            latency={"notX": 1},
        )
    raise ValueError(f"unknown leak model {leak_model!r}; expected one of {LEAK_MODELS}")


def build_timer(at: int = 0) -> Brick:
    """A single spike ``at`` steps after the brick's start."""
    return Brick(
        kind="timer",
        neurons=(_timer(at, "timer"),),
        synapses=(_one_shot(0),),
        out_ports={"out": 0},
        latency={"out": at},
        widths={"out": 1},
        clocked={0},
    )


def build_carry_check(k: int, bit: int | None = None) -> Brick:
    """S -> gt: spike iff bit ``bit`` (default ``k``) of the monitored stream is 1.

    A one-shot timer lands on the check neuron together with the monitored bit;
    the check neuron needs both to reach its threshold of 2.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    bit = k if bit is None else bit
    return Brick(
        kind="carry_check",
        neurons=(NeuronConfig.gate(2, "check"), _timer(bit, "timer")),
        synapses=(Synapse(1, 0, 1), _one_shot(1)),
        in_ports={"S": (PortTarget(0, 1, 1),)},
        out_ports={"gt": 0},
        latency={"gt": bit + 1},
        widths={"gt": 1},
        clocked={1},
    )


def build_inequality(k: int, variant: str = "arithmetic") -> Brick:
    """A, B -> gt, a single spike iff A > B for unsigned k-bit operands."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if variant == "arithmetic":
        sc = Scaffold("inequality")
        sc.add_input("A", k).add_input("B", k)
        sc.add_brick("not", build_not(ADDITIVE))
        sc.add_brick("add", build_adder())
        # The carry out of bit k-1 is read off the carry stream: the free-running
        # NOT also spikes at bit k, so the sum's bit k holds the inverted carry.
        sc.add_brick("check", build_carry_check(k, bit=k - 1))
        sc.connect("B", "not.X")
        sc.connect("A", "add.A")
        sc.connect("not.notX", "add.B")
        sc.connect("add.C", "check.S")
        sc.add_output("gt", "check.gt")
        return sc.to_brick("inequality")
    if variant == "decay":
        # Under 0.5 decay a unit arriving j steps before the probe is worth
        # 2**-j, so equal +-1 weights land bit i of A - B at weight 2**(i-k).
        # The probe sits one LSB below threshold: ties stay silent.
        den = 2 ** max(k, 1)
        check = NeuronConfig(threshold=2, leak_mode=MULTIPLICATIVE, leak_value=0.5, label="check")
        return Brick(
            kind="inequality",
            neurons=(check, _timer(k, "probe")),
            synapses=(Synapse(1, 0, 2 - 1 / den), _one_shot(1)),
            in_ports={"A": (PortTarget(0, 1, 1),), "B": (PortTarget(0, -1, 1),)},
            out_ports={"gt": 0},
            latency={"gt": k + 1},
            widths={"gt": 1},
            clocked={1},
            denominator=den,
        )
    raise ValueError(f"unknown inequality variant {variant!r}; expected one of {INEQUALITY_VARIANTS}")


def build_mux(k: int) -> Brick:
    """A, B, select, stop -> out.  Passes A unless select fired, then B.

    ``select`` is a single spike one step ahead of bit 0; the select neuron
    holds it with a self-loop until ``stop`` arrives (``stop`` is expected
    ``k - 1`` steps after bit 0, i.e. it ends the hold after k spikes).
    B_in has threshold 2, equivalent to a -1 bias on a unit threshold, so it
    only passes B while select is active.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    a_in, b_in, sel, out = range(4)
    neurons = (
        NeuronConfig.gate(1, "A_in"),
        NeuronConfig.gate(2, "B_in"),
        NeuronConfig.gate(1, "select"),
        NeuronConfig.gate(1, "out"),
    )
    synapses = (
        Synapse(sel, sel, 1), Synapse(sel, a_in, -1), Synapse(sel, b_in, 1),
        Synapse(a_in, out, 1), Synapse(b_in, out, 1),
    )
    return Brick(
        kind="mux",
        neurons=neurons,
        synapses=synapses,
        in_ports={
            "A": (PortTarget(a_in),),
            "B": (PortTarget(b_in),),
            "select": (PortTarget(sel),),
            "stop": (PortTarget(sel, -1),),
        },
        port_offsets={"select": -1, "stop": k - 1},
        out_ports={"out": out},
        latency={"out": 2},
        widths={"out": k},
    )


def build_minmax(k: int, mode: str = "max", variant: str = "arithmetic") -> Brick:
    """A, B -> out = max(A, B) or min(A, B)."""
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    sc = Scaffold("minmax")
    sc.add_input("A", k).add_input("B", k)
    sc.add_brick("cmp", build_inequality(k, variant))
    sc.add_brick("mux", build_mux(k))
    sc.add_brick("stop", build_timer())
    sc.connect("A", "cmp.A")
    sc.connect("B", "cmp.B")
    sc.connect("cmp.gt", "mux.select")
    sc.connect("stop.out", "mux.stop")
    # Silent select (A <= B) passes the mux's A input.
    first, second = ("B", "A") if mode == "max" else ("A", "B")
    sc.connect(first, "mux.A")
    sc.connect(second, "mux.B")
    sc.add_output("out", "mux.out")
    return sc.to_brick("minmax")


def build_subtractor(k: int) -> Brick:
    """A, B -> D = A - B as a (k+1)-bit two's-complement stream.

    D = A + (inv(B) + 1).  The NOT keeps spiking past bit k-1, which supplies
    the inverted zero-extension bits for free.

    The NOT also spikes before bit 0, from step 0 on: a run of ones below the
    LSB.  The "+1" is therefore injected at step 0, under the lowest of those
    ones; its carry ripples up and arrives at bit 0 as the +1, and leaves D
    silent before its window.  So the one-shot is left unanchored.
    """
    sc = Scaffold("subtractor")
    sc.add_input("A", k).add_input("B", k)
    sc.add_brick("not", build_not(ADDITIVE))
    sc.add_brick("one", replace(build_timer(), clocked=frozenset()))
    sc.add_brick("neg", build_adder())
    sc.add_brick("sum", build_adder())
    sc.connect("B", "not.X")
    sc.connect("not.notX", "neg.A")
    sc.connect("one.out", "neg.B")
    sc.connect("A", "sum.A")
    sc.connect("neg.S", "sum.B")
    sc.add_output("D", "sum.S")
    brick = sc.to_brick("subtractor")
    return replace(brick, widths={"D": k + 1}, signedness={"D": TWOS_COMPLEMENT})


def build_delay(d: int, max_delay: int | None = None) -> Brick:
    """X -> Y delayed by exactly ``d`` steps.

    One relay on a single ``d``-step synapse, or a relay chain when synapses
    are limited to ``max_delay`` steps.
    """
    if d < 1:
        raise ValueError(f"delay must be at least 1, got {d}")
    if max_delay is None or d <= max_delay:
        return Brick(
            kind="delay",
            neurons=(NeuronConfig.gate(1, f"relay[{d}]"),),
            in_ports={"X": (PortTarget(0, 1, d),)},
            out_ports={"Y": 0},
            latency={"Y": d},
        )
    n = math.ceil(d / max_delay)
    first = d - (n - 1) * max_delay
    neurons = tuple(NeuronConfig.gate(1, f"chain{i}") for i in range(n))
    synapses = tuple(Synapse(i, i + 1, 1, max_delay) for i in range(n - 1))
    return Brick(
        kind="delay",
        neurons=neurons,
        synapses=synapses,
        in_ports={"X": (PortTarget(0, 1, first),)},
        out_ports={"Y": n - 1},
        latency={"Y": d},
    )


def build_shift(p: int) -> Brick:
    """X -> Y = X * 2**p: the stream is held back ``p`` extra steps behind a unit relay."""
    if p < 0:
        raise ValueError("shift must be non-negative")
    return Brick(
        kind="shift",
        neurons=(NeuronConfig.gate(1, f"shift[{p}]"),),
        in_ports={"X": (PortTarget(0, 1, p + 1),)},
        out_ports={"Y": 0},
        latency={"Y": 1},
        widths={"Y": _grow(p)},
    )


def _bit_positions(a: int) -> list[int]:
    return [p for p in range(a.bit_length()) if a >> p & 1]


def build_scalar_mult(a: int, k: int) -> Brick:
    """X -> Y = a * X for a fixed non-negative ``a``, by summing shifted copies of X."""
    if a < 0:
        raise ValueError("scalar must be non-negative")
    width = k + a.bit_length()
    positions = _bit_positions(a)
    if not positions:
        return Brick(
            kind="scalar_mult",
            neurons=(NeuronConfig.gate(1, "silent"),),
            in_ports={"X": ()},
            out_ports={"Y": 0},
            latency={"Y": 1},
            widths={"Y": width},
            parts={},
        )
    if len(positions) == 1:
        shift = build_shift(positions[0])
        return replace(shift, kind="scalar_mult", widths={"Y": width})

    sc = Scaffold("scalar_mult")
    sc.add_input("X", k)
    for j, p in enumerate(positions):
        sc.add_brick(f"shift{j}", build_shift(p))
        sc.connect("X", f"shift{j}.X")
    acc = "shift0.Y"
    for j in range(1, len(positions)):
        sc.add_brick(f"add{j}", build_adder())
        sc.connect(acc, f"add{j}.A")
        sc.connect(f"shift{j}.Y", f"add{j}.B")
        acc = f"add{j}.S"
    sc.add_output("Y", acc)
    return replace(sc.to_brick("scalar_mult"), widths={"Y": width})


def _build_gated_shifts(k: int) -> Brick:
    """X, Y -> P0..P{k-1}, where Pi = X * 2**i if bit i of Y is set, else silent.

    After Y has streamed in, a strobe latches each bit i of Y into a
    self-sustaining neuron; latch i then gates a copy of X held back by i
    extra steps.  A clear timer drops every latch after the last gated bit.
    """
    strobe, clear = 0, 1
    latch = [2 + i for i in range(k)]
    gate = [2 + k + i for i in range(k)]
    neurons = [_timer(k - 1, "strobe"), _timer(3 * k - 1, "clear")]
    neurons += [NeuronConfig.gate(2, f"latch{i}") for i in range(k)]
    neurons += [NeuronConfig.gate(2, f"gate{i}") for i in range(k)]
    synapses = [_one_shot(strobe), _one_shot(clear)]
    for i in range(k):
        synapses += [
            Synapse(strobe, latch[i], 1),
            Synapse(clear, latch[i], -ONE_SHOT_INHIBITION),
            Synapse(latch[i], latch[i], 2),
            Synapse(latch[i], gate[i], 1),
        ]
    return Brick(
        kind="gated_shifts",
        neurons=tuple(neurons),
        synapses=tuple(synapses),
        # Y's bit i arrives at latch i exactly when the strobe does (step k).
        in_ports={
            "Y": tuple(PortTarget(latch[i], 1, k - i) for i in range(k)),
            "X": tuple(PortTarget(gate[i], 1, k + 1 + i) for i in range(k)),
        },
        out_ports={f"P{i}": gate[i] for i in range(k)},
        latency={f"P{i}": k + 1 for i in range(k)},
        widths={f"P{i}": 2 * k for i in range(k)},
        clocked={strobe, clear},
    )


def build_variable_mult(k: int) -> Brick:
    """X, Y -> P = X * Y over 2k bits: k latch-gated partial products summed by adders."""
    if k < 1:
        raise ValueError("k must be at least 1")
    sc = Scaffold("variable_mult")
    sc.add_input("X", k).add_input("Y", k)
    sc.add_brick("gates", _build_gated_shifts(k))
    sc.connect("X", "gates.X")
    sc.connect("Y", "gates.Y")
    acc = "gates.P0"
    for i in range(1, k):
        sc.add_brick(f"add{i}", build_adder())
        sc.connect(acc, f"add{i}.A")
        sc.connect(f"gates.P{i}", f"add{i}.B")
        acc = f"add{i}.S"
    sc.add_output("P", acc)
    return replace(sc.to_brick("variable_mult"), widths={"P": 2 * k})
