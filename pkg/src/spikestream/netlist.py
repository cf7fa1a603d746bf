"""File formats: JSON netlists, Graphviz DOT and raster CSV.

Netlists store every parameter as an integer numerator over the network's
fixed-point ``denominator``; loading divides back with exact fractions, so a
dump/load/dump cycle is byte-identical.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping

from .core import Network, NeuronConfig, Raster, Synapse, Tap, to_fixed
from .scaffold import LoweredNetwork, PortSchedule

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def _num(fixed: int, den: int):
    value = Fraction(fixed, den)
    return int(value) if value.denominator == 1 else value


def netlist_dict(network: Network, schedule: Mapping[str, PortSchedule] | None = None) -> dict:
    den = network.denominator
    doc = {
        "format_version": FORMAT_VERSION,
        "denominator": den,
        "neurons": [
            {
                "id": i,
                "label": cfg.label,
                "threshold": to_fixed(cfg.threshold, den),
                "leak_mode": cfg.leak_mode,
                "leak_value": to_fixed(cfg.leak_value, den),
                "reset": to_fixed(cfg.reset_potential, den),
                "initial": to_fixed(cfg.initial_potential, den),
            }
            for i, cfg in enumerate(network.neurons)
        ],
        "synapses": [
            {"pre": s.pre, "post": s.post, "weight": to_fixed(s.weight, den), "delay": int(s.delay)}
            for s in network.synapses
        ],
        "taps": {
            "inputs": {
                name: {"neuron": tap.neuron,
                       "weight": None if tap.weight is None else to_fixed(tap.weight, den)}
                for name, tap in network.input_taps.items()
            },
            "outputs": dict(network.output_taps),
        },
        "schedule": {
            name: {"neuron": s.neuron, "offset": s.offset, "width": s.width, "signedness": s.signedness}
            for name, s in (schedule or {}).items()
        },
    }
    return doc


def dumps_netlist(network: Network, schedule: Mapping[str, PortSchedule] | None = None) -> str:
    return json.dumps(netlist_dict(network, schedule), indent=2) + "\n"


def loads_netlist(text: str) -> tuple[Network, dict[str, PortSchedule]]:
    doc = json.loads(text)
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported netlist format_version {doc.get('format_version')!r}")
    den = doc["denominator"]
    neurons = [
        NeuronConfig(
            threshold=_num(n["threshold"], den),
            leak_mode=n["leak_mode"],
            leak_value=_num(n["leak_value"], den),
            reset_potential=_num(n["reset"], den),
            initial_potential=_num(n["initial"], den),
            label=n.get("label", ""),
        )
        for n in sorted(doc["neurons"], key=lambda n: n["id"])
    ]
    synapses = [Synapse(s["pre"], s["post"], _num(s["weight"], den), s["delay"]) for s in doc["synapses"]]
    taps = {
        name: Tap(t["neuron"], None if t["weight"] is None else _num(t["weight"], den))
        for name, t in doc["taps"]["inputs"].items()
    }
    net = Network(neurons, synapses, taps, doc["taps"]["outputs"], den)
    schedule = {name: PortSchedule(**s) for name, s in doc.get("schedule", {}).items()}
    return net, schedule


def dumps_lowered(lowered: LoweredNetwork) -> str:
    return dumps_netlist(lowered.network, lowered.schedule)


def loads_lowered(text: str) -> LoweredNetwork:
    net, schedule = loads_netlist(text)
    inputs = {k: v for k, v in schedule.items() if k in net.input_taps}
    outputs = {k: v for k, v in schedule.items() if k not in net.input_taps}
    return LoweredNetwork(net, inputs, outputs)


def _fmt(value) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else str(float(value))


def to_dot(network: Network, name: str = "network") -> str:
    """Graphviz description: one node per neuron, edges labelled ``weight/delay``."""
    lines = [f'digraph "{name}" {{', "  rankdir=LR;"]
    tapped = {t.neuron: k for k, t in network.input_taps.items()}
    outs = {v: k for k, v in network.output_taps.items()}
    for i, cfg in enumerate(network.neurons):
        label = cfg.label or f"n{i}"
        leak = f"{cfg.leak_mode[0]}{_fmt(cfg.leak_value)}"
        attrs = [f'label="{label}\\nth={_fmt(cfg.threshold)} {leak}"']
        if i in tapped:
            attrs.append("shape=invhouse")
        elif i in outs:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for s in network.synapses:
        style = ", color=red" if s.weight < 0 else ""
        lines.append(f'  n{s.pre} -> n{s.post} [label="{_fmt(s.weight)}/{s.delay}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def raster_to_csv(raster: Raster) -> str:
    """``time,neuron_id`` rows sorted by time then neuron, after a version line."""
    rows = [f"# format_version={FORMAT_VERSION} horizon={raster.horizon}", "time,neuron_id"]
    rows += [f"{t},{n}" for t, n in raster.events]
    return "\n".join(rows) + "\n"


def raster_from_csv(text: str) -> Raster:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    meta = dict(part.split("=") for part in lines[0].lstrip("# ").split())
    if int(meta["format_version"]) != FORMAT_VERSION:
        raise FormatError("unsupported raster format_version")
    events = [tuple(int(x) for x in ln.split(",")) for ln in lines[2:]]
    return Raster(tuple(events), int(meta["horizon"]))
