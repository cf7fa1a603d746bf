"""Integer oracles and differential sweeps of the circuit library.

The oracles below use nothing but Python integers; they never touch the
simulator or the brick builders.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

import numpy as np

from . import circuits
from .brick import Brick

EXHAUSTIVE_MAX_WIDTH = 8
EXHAUSTIVE_MAX_CASES = 2 ** 20
DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 20211
BATCH_SIZE = 1 << 16
REPORT_FORMAT_VERSION = 1


# -- oracles ------------------------------------------------------------------

def ones_complement_carry(a: int, b: int, k: int) -> int:
    """End-around carry of A + inv(B) over k bits."""
    mask = (1 << k) - 1
    return ((a + (~b & mask)) >> k) & 1


def twos_complement_difference(a: int, b: int, k: int) -> int:
    """A + (inv(B) + 1) over k+1 bits, read back as a signed value."""
    width = k + 1
    mask = (1 << width) - 1
    raw = (a + ((~b & mask) + 1)) & mask
    return raw - (1 << width) if raw >> k & 1 else raw


def oracle(circuit: str, operands: Mapping[str, int], k: int, **options) -> int:
    o = operands
    if circuit == "adder":
        return o["A"] + o["B"]
    if circuit == "not":
        return ~o["X"] & ((1 << k) - 1)
    if circuit == "carry_check":
        return o["S"] >> k & 1
    if circuit == "inequality":
        return ones_complement_carry(o["A"], o["B"], k)
    if circuit == "mux":
        return o["B"] if o["select"] else o["A"]
    if circuit == "minmax":
        pick = max if options.get("mode", "max") == "max" else min
        return pick(o["A"], o["B"])
    if circuit == "subtractor":
        return twos_complement_difference(o["A"], o["B"], k)
    if circuit == "scalar_mult":
        return options.get("a", 1) * o["X"]
    if circuit == "variable_mult":
        return o["X"] * o["Y"]
    raise KeyError(f"no oracle for {circuit!r}")


# -- mutations ----------------------------------------------------------------

# Single-parameter faults that an exhaustive k=3 sweep must expose.
MUTATIONS: dict[str, tuple[str, Callable[[Brick], Brick]]] = {
    "adder.T2.threshold=3": ("adder", lambda b: b.mutated("T2", threshold=3)),
    "adder.T1.threshold=2": ("adder", lambda b: b.mutated("T1", threshold=2)),
    "adder.S.threshold=2": ("adder", lambda b: b.mutated("S", threshold=2)),
    "mux.B_in.threshold=1": ("mux", lambda b: b.mutated("B_in", threshold=1)),
    "mux.A_in.threshold=2": ("mux", lambda b: b.mutated("A_in", threshold=2)),
    "mux.out.threshold=2": ("mux", lambda b: b.mutated("out", threshold=2)),
}


# -- sweeps -------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    circuit: str
    widths: tuple[int, ...]
    mode: str = "exhaustive"
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    options: Mapping[str, object] = field(default_factory=dict)
    mutation: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(self.widths))
        circuits.get(self.circuit)
        if self.mode not in ("exhaustive", "random"):
            raise ValueError(f"mode must be 'exhaustive' or 'random', got {self.mode!r}")
        if self.mutation is not None and self.mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation!r}")
        if self.mutation is not None and MUTATIONS[self.mutation][0] != self.circuit:
            raise ValueError(f"mutation {self.mutation!r} does not apply to {self.circuit!r}")
        if any(k < 1 for k in self.widths):
            raise ValueError("widths must be positive")
        if self.mode == "exhaustive":
            spec = circuits.get(self.circuit)
            for k in self.widths:
                bits = sum(spec.operand_widths(k).values())
                if k > EXHAUSTIVE_MAX_WIDTH or 2 ** bits > EXHAUSTIVE_MAX_CASES:
                    raise ValueError(
                        f"exhaustive sweep of {self.circuit} at k={k} exceeds the bound "
                        f"(k <= {EXHAUSTIVE_MAX_WIDTH}, <= 2**20 cases); use random mode"
                    )


@dataclass
class Counterexample:
    circuit: str
    k: int
    operands: dict[str, int]
    expected: int
    got: int
    options: dict[str, object]
    raster_csv: str


@dataclass
class WidthResult:
    k: int
    cases: int
    failures: int
    neurons: int
    timesteps: int


@dataclass
class Report:
    circuit: str
    mode: str
    options: dict[str, object]
    mutation: str | None
    rows: list[WidthResult] = field(default_factory=list)
    counterexample: Counterexample | None = None

    @property
    def cases(self) -> int:
        return sum(r.cases for r in self.rows)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            **asdict(self),
            "cases": self.cases,
            "failures": self.failures,
            "neurons": sum(r.neurons for r in self.rows),
            "timesteps": sum(r.timesteps for r in self.rows),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        opts = " ".join(f"{k}={v}" for k, v in sorted(self.options.items()))
        head = f"{self.circuit} [{self.mode}] {opts}".rstrip()
        if self.mutation:
            head += f" mutation={self.mutation}"
        lines = [head]
        for r in self.rows:
            lines.append(f"  k={r.k:2d} cases={r.cases:7d} failures={r.failures:6d} "
                         f"neurons={r.neurons:4d} steps={r.timesteps}")
        lines.append(f"  total: {self.cases} cases, {self.failures} failures -> "
                     f"{'PASS' if self.ok else 'FAIL'}")
        if self.counterexample:
            c = self.counterexample
            lines.append(f"  first counterexample: k={c.k} {c.operands} expected={c.expected} got={c.got}")
            lines.append("  raster:")
            lines.extend("    " + row for row in c.raster_csv.splitlines())
        return "\n".join(lines)


def _operand_grid(spec: circuits.CircuitSpec, k: int, sweep: SweepSpec) -> np.ndarray:
    widths = spec.operand_widths(k)
    if sweep.mode == "exhaustive":
        ranges = [range(1 << widths[op]) for op in spec.operands]
        return np.array(list(itertools.product(*ranges)), dtype=np.int64).reshape(-1, len(ranges))
    rng = np.random.default_rng([sweep.seed, k])
    cols = [rng.integers(0, 1 << widths[op], size=sweep.samples) for op in spec.operands]
    return np.stack(cols, axis=1).astype(np.int64)


def sweep(spec: SweepSpec) -> Report:
    """Build, run and decode every case, comparing with the integer oracle."""
    circuit = circuits.get(spec.circuit)
    mutate = MUTATIONS[spec.mutation][1] if spec.mutation else None
    report = Report(spec.circuit, spec.mode, dict(spec.options), spec.mutation)
    for k in spec.widths:
        lowered = circuits.build(spec.circuit, k, mutation=mutate, **spec.options)
        horizon = lowered.default_horizon()
        grid = _operand_grid(circuit, k, spec)
        expected = np.array(
            [oracle(spec.circuit, dict(zip(circuit.operands, map(int, row))), k, **spec.options)
             for row in grid],
            dtype=np.int64,
        )
        got = np.empty_like(expected)
        for lo in range(0, len(grid), BATCH_SIZE):
            chunk = grid[lo:lo + BATCH_SIZE]
            ops = {op: chunk[:, i] for i, op in enumerate(circuit.operands)}
            got[lo:lo + BATCH_SIZE] = lowered.evaluate_batch(ops, horizon)[circuit.output]
        bad = np.nonzero(got != expected)[0]
        report.rows.append(WidthResult(k, len(grid), len(bad), lowered.neuron_count, horizon))
        if len(bad) and report.counterexample is None:
            i = int(bad[0])
            operands = dict(zip(circuit.operands, map(int, grid[i])))
            from .netlist import raster_to_csv
            raster = lowered.raster(horizon, **operands)
            report.counterexample = Counterexample(
                spec.circuit, k, operands, int(expected[i]), int(got[i]),
                dict(spec.options), raster_to_csv(raster),
            )
    return report


LIBRARY = ("adder", "not", "carry_check", "inequality", "mux", "minmax",
           "subtractor", "scalar_mult", "variable_mult")


def variants(circuit: str) -> list[dict]:
    """Option sets a full verification of ``circuit`` covers."""
    table = {
        "not": [{"leak": "additive"}, {"leak": "multiplicative"}],
        "inequality": [{"variant": "arithmetic"}, {"variant": "decay"}],
        "minmax": [{"mode": m, "variant": v} for m in ("max", "min") for v in ("arithmetic", "decay")],
        "scalar_mult": [{"a": a} for a in range(32)],
    }
    return table.get(circuit, [{}])


def sweep_all(widths, mode: str = "exhaustive", samples: int = DEFAULT_SAMPLES,
              seed: int = DEFAULT_SEED, circuits_: tuple[str, ...] = LIBRARY) -> list[Report]:
    """Sweep every option set of every named circuit over ``widths``."""
    return [
        sweep(SweepSpec(c, widths, mode, samples, seed, opts))
        for c in circuits_ for opts in variants(c)
    ]
