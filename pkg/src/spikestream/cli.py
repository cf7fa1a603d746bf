"""Command line: ``spikestream run | verify | export``.

Exit status is 0 on success, 1 when a verification sweep finds a failure and
2 for usage errors.  Relative output paths are resolved against
``$SPIKESTREAM_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import circuits, netlist, verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
OUTPUT_DIR_ENV = "SPIKESTREAM_OUTPUT_DIR"

OPERAND_FLAGS = {"A": "a", "B": "b", "X": "x", "Y": "y", "S": "s", "select": "select"}


class UsageError(Exception):
    pass


def output_path(path: str | None, default_name: str) -> Path:
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    if path is None:
        return base / default_name
    p = Path(path)
    return p if p.is_absolute() else base / p


def parse_widths(text: str) -> tuple[int, ...]:
    """``"3"``, ``"1..6"`` or ``"1,2,5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad width list {text!r}") from None


def _options(args, circuit: str) -> dict:
    opts = {}
    if circuit == "not":
        opts["leak"] = args.leak
    if circuit in ("inequality", "minmax"):
        opts["variant"] = args.variant
    if circuit == "minmax":
        opts["mode"] = args.minmax_mode
    if circuit == "scalar_mult":
        opts["a"] = args.scalar
    return opts


def _add_circuit_options(p: argparse.ArgumentParser, minmax_flag: str):
    p.add_argument("--leak", choices=("additive", "multiplicative"), default="additive",
                   help="NOT gate leak model")
    p.add_argument("--variant", choices=("arithmetic", "decay"), default="arithmetic",
                   help="inequality realisation")
    p.add_argument(minmax_flag, dest="minmax_mode", choices=("min", "max"), default="max")
    p.add_argument("--scalar", type=int, default=1, help="constant for scalar_mult")


def cmd_run(args) -> int:
    spec = circuits.get(args.circuit)
    opts = _options(args, args.circuit)
    widths = spec.operand_widths(args.width)
    operands = {}
    for op in spec.operands:
        value = getattr(args, OPERAND_FLAGS[op])
        if value is None:
            raise UsageError(f"{args.circuit} needs --{OPERAND_FLAGS[op]}")
        if not 0 <= value < 1 << widths[op]:
            raise UsageError(f"--{OPERAND_FLAGS[op]} {value} does not fit in {widths[op]} unsigned bits")
        operands[op] = value
    if args.circuit == "scalar_mult" and args.scalar < 0:
        raise UsageError("--scalar must be non-negative")

    lowered = circuits.build(args.circuit, args.width, **opts)
    raster = lowered.raster(**operands)
    out = lowered.outputs[spec.output]
    if args.raw:
        print(" ".join(str(t) for t in raster.times(out.neuron)))
    else:
        print(lowered.evaluate(**operands)[spec.output])
    if args.raster:
        path = output_path(args.raster, "raster.csv")
        path.write_text(netlist.raster_to_csv(raster))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = verify.LIBRARY if args.circuit == "all" else (args.circuit,)
    specs = []
    try:
        for name in names:
            option_sets = verify.variants(name)
            if args.scalar is not None and name == "scalar_mult":
                option_sets = [{"a": args.scalar}]
            for opts in option_sets:
                specs.append(verify.SweepSpec(name, args.widths, args.mode, args.samples,
                                              args.seed, opts, args.mutation))
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    reports = [verify.sweep(s) for s in specs]
    for r in reports:
        print(r.to_text())
    failures = sum(r.failures for r in reports)
    print(f"{len(reports)} sweeps, {sum(r.cases for r in reports)} cases, {failures} failures")
    if args.report:
        path = output_path(args.report, "verify-report.json")
        doc = {"format_version": verify.REPORT_FORMAT_VERSION, "ok": failures == 0,
               "reports": [r.to_dict() for r in reports]}
        path.write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if failures == 0 else EXIT_FAILED


def cmd_export(args) -> int:
    if args.netlist_in:
        lowered = netlist.loads_lowered(Path(args.netlist_in).read_text())
        stem = Path(args.netlist_in).name.split(".")[0]
    else:
        if args.circuit is None:
            raise UsageError("export needs a circuit name or --from")
        lowered = circuits.build(args.circuit, args.width, **_options(args, args.circuit))
        stem = f"{args.circuit}-k{args.width}"
    if args.format == "netlist":
        text = netlist.dumps_lowered(lowered)
        path = output_path(args.output, f"{stem}.netlist.json")
    else:
        text = netlist.to_dot(lowered.network, stem)
        path = output_path(args.output, f"{stem}.dot")
    path.write_text(text)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spikestream", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one circuit on concrete operands")
    p.add_argument("circuit", choices=sorted(circuits.CIRCUITS))
    p.add_argument("--width", type=int, required=True)
    for flag in OPERAND_FLAGS.values():
        p.add_argument(f"--{flag}", type=int)
    _add_circuit_options(p, "--mode")
    p.add_argument("--raw", action="store_true", help="print output spike times instead")
    p.add_argument("--raster", metavar="CSV", help="write the full raster")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="differential sweep against integer oracles")
    p.add_argument("--circuit", default="all", choices=["all", *verify.LIBRARY])
    p.add_argument("--widths", type=parse_widths, default=(1, 2, 3, 4))
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--samples", type=int, default=verify.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--scalar", type=int, default=None, help="only this scalar_mult constant")
    p.add_argument("--mutation", choices=sorted(verify.MUTATIONS))
    p.add_argument("--report", metavar="JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write a circuit as a netlist or DOT graph")
    p.add_argument("circuit", nargs="?", choices=sorted(circuits.CIRCUITS))
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--format", choices=("netlist", "dot"), default="netlist")
    p.add_argument("--from", dest="netlist_in", metavar="NETLIST", help="re-export a saved netlist")
    p.add_argument("-o", "--output")
    _add_circuit_options(p, "--minmax-mode")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "width", 1) is not None and getattr(args, "width", 1) < 1:
        parser.error("--width must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spikestream: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
