"""Named stand-alone circuits: one library brick wrapped with input taps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import bricks
from .brick import Brick
from .scaffold import LoweredNetwork, Scaffold


@dataclass(frozen=True)
class CircuitSpec:
    name: str
    operands: tuple[str, ...]
    output: str
    make: Callable[..., Brick]

    def operand_widths(self, k: int) -> dict[str, int]:
        if self.name == "carry_check":
            return {"S": k + 1}
        return {op: (1 if op == "select" else k) for op in self.operands}


CIRCUITS: dict[str, CircuitSpec] = {
    "adder": CircuitSpec("adder", ("A", "B"), "S", lambda k, **_: bricks.build_adder()),
    "not": CircuitSpec("not", ("X",), "notX",
                       lambda k, leak="additive", **_: bricks.build_not(leak)),
    "carry_check": CircuitSpec("carry_check", ("S",), "gt",
                               lambda k, **_: bricks.build_carry_check(k)),
    "inequality": CircuitSpec("inequality", ("A", "B"), "gt",
                              lambda k, variant="arithmetic", **_: bricks.build_inequality(k, variant)),
    "mux": CircuitSpec("mux", ("A", "B", "select"), "out", lambda k, **_: bricks.build_mux(k)),
    "minmax": CircuitSpec("minmax", ("A", "B"), "out",
                          lambda k, mode="max", variant="arithmetic", **_:
                          bricks.build_minmax(k, mode, variant)),
    "subtractor": CircuitSpec("subtractor", ("A", "B"), "D", lambda k, **_: bricks.build_subtractor(k)),
    "scalar_mult": CircuitSpec("scalar_mult", ("X",), "Y",
                               lambda k, a=1, **_: bricks.build_scalar_mult(a, k)),
    "variable_mult": CircuitSpec("variable_mult", ("X", "Y"), "P",
                                 lambda k, **_: bricks.build_variable_mult(k)),
}


def get(name: str) -> CircuitSpec:
    try:
        return CIRCUITS[name]
    except KeyError:
        raise KeyError(f"unknown circuit {name!r}; choose from {sorted(CIRCUITS)}") from None


def scaffold(name: str, k: int, mutation: Callable[[Brick], Brick] | None = None,
             max_delay: int | None = None, **options) -> Scaffold:
    spec = get(name)
    brick = spec.make(k, **options)
    if mutation is not None:
        brick = mutation(brick)
    sc = Scaffold(name, max_delay=max_delay)
    widths = spec.operand_widths(k)
    for op in spec.operands:
        sc.add_input(op, widths[op])
    sc.add_brick(name, brick)
    for op in spec.operands:
        sc.connect(op, f"{name}.{op}")
    # A stand-alone mux leaves ``stop`` undriven: the select hold then outlives
    # the window, where A and B are silent anyway.
    sc.add_output(spec.output, f"{name}.{spec.output}")
    return sc


def build(name: str, k: int, mutation: Callable[[Brick], Brick] | None = None,
          max_delay: int | None = None, **options) -> LoweredNetwork:
    """Lower circuit ``name`` at width ``k`` into a runnable network."""
    return scaffold(name, k, mutation, max_delay, **options).lower()
