"""Acceptance criteria, each at its stated tolerance (all outputs are exact).

Every test also prints a one-line verdict; the conftest collects them into an
"acceptance criteria" section at the end of the run.
"""
import time

import numpy as np
import pytest

from spikestream import bricks, circuits, verify
from spikestream.netlist import dumps_lowered, loads_lowered, raster_to_csv
from spikestream.streams import TWOS_COMPLEMENT, UNSIGNED, decode_batch, encode_batch, value_range
from spikestream.verify import MUTATIONS, SweepSpec, sweep

K_MAX = 8


def pairs(k):
    a, b = np.meshgrid(np.arange(1 << k), np.arange(1 << k), indexing="ij")
    return a.ravel(), b.ravel()


def run_pairs(name, k, **options):
    a, b = pairs(k)
    out = circuits.build(name, k, **options).evaluate_batch({"A": a, "B": b})
    return a, b, out[circuits.get(name).output]


def verdict(number, ok, detail=""):
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, detail


@pytest.mark.criterion(1, "adder exhaustive k=1..8 equals A+B, full sweep < 60 s")
def test_criterion_01_adder():
    start = time.perf_counter()
    report = sweep(SweepSpec("adder", range(1, K_MAX + 1)))
    elapsed = time.perf_counter() - start
    assert report.cases == sum(4 ** k for k in range(1, K_MAX + 1))
    verdict(1, report.failures == 0 and elapsed < 60,
            f"{report.cases} cases, {report.failures} failures, {elapsed:.1f} s")


@pytest.mark.criterion(2, "NOT complements every k-bit input, k<=8; 1 neuron additive, 2 multiplicative")
def test_criterion_02_not():
    failures = 0
    for leak in ("additive", "multiplicative"):
        for k in range(1, K_MAX + 1):
            x = np.arange(1 << k)
            got = circuits.build("not", k, leak=leak).evaluate_batch({"X": x})["notX"]
            failures += int(np.count_nonzero(got != (~x & ((1 << k) - 1))))
    sizes = {leak: circuits.build("not", 4, leak=leak).neuron_count for leak in ("additive", "multiplicative")}
    verdict(2, failures == 0 and sizes == {"additive": 1, "multiplicative": 2}, f"{failures} failures, {sizes}")


@pytest.mark.criterion(3, "arithmetic inequality spikes iff A > B, k<=8; carry check uses 2 neurons")
def test_criterion_03_inequality():
    failures = 0
    for k in range(1, K_MAX + 1):
        a, b, gt = run_pairs("inequality", k, variant="arithmetic")
        failures += int(np.count_nonzero(gt != (a > b)))
    check = bricks.build_carry_check(K_MAX).size
    verdict(3, failures == 0 and check == 2, f"{failures} failures, carry check {check} neurons")


@pytest.mark.criterion(4, "decay inequality (0.5) agrees with arithmetic for all pairs, k<=8; one check neuron")
def test_criterion_04_decay_agreement():
    disagreements = 0
    for k in range(1, K_MAX + 1):
        _, _, arithmetic = run_pairs("inequality", k, variant="arithmetic")
        _, _, decay = run_pairs("inequality", k, variant="decay")
        disagreements += int(np.count_nonzero(arithmetic != decay))
    brick = bricks.build_inequality(K_MAX, "decay")
    checks = [n for n in brick.neurons if n.label == "check"]
    ok = disagreements == 0 and len(checks) == 1 and checks[0].leak_value == 0.5
    verdict(4, ok, f"{disagreements} disagreements, {len(checks)} check neuron")


@pytest.mark.criterion(5, "mux passes the selected input for all 4-bit pairs, both selects; 4 neurons")
def test_criterion_05_mux():
    lowered = circuits.build("mux", 4)
    a, b = pairs(4)
    failures = 0
    for select in (0, 1):
        out = lowered.evaluate_batch({"A": a, "B": b, "select": np.full_like(a, select)})["out"]
        failures += int(np.count_nonzero(out != (b if select else a)))
    verdict(5, failures == 0 and lowered.neuron_count == 4, f"{failures} failures, {lowered.neuron_count} neurons")


@pytest.mark.criterion(6, "min/max equal integer min/max for all pairs incl. ties, k<=8")
def test_criterion_06_minmax():
    failures = 0
    for mode, pick in (("max", np.maximum), ("min", np.minimum)):
        for variant in ("arithmetic", "decay"):
            for k in range(1, K_MAX + 1):
                a, b, out = run_pairs("minmax", k, mode=mode, variant=variant)
                failures += int(np.count_nonzero(out != pick(a, b)))
    verdict(6, failures == 0, f"{failures} failures")


@pytest.mark.criterion(7, "subtractor decodes A-B in two's complement for all pairs, k<=8")
def test_criterion_07_subtractor():
    failures = negatives = 0
    for k in range(1, K_MAX + 1):
        a, b, d = run_pairs("subtractor", k)
        failures += int(np.count_nonzero(d != a - b))
        negatives += int(np.count_nonzero(d < 0))
    verdict(7, failures == 0 and negatives > 0, f"{failures} failures, {negatives} negative results")


@pytest.mark.criterion(8, "scalar multiplier a*x for a in 0..31, k<=6; a in {1, 2^p} uses no adders")
def test_criterion_08_scalar_mult():
    failures = 0
    for a in range(32):
        for k in range(1, 7):
            x = np.arange(1 << k)
            y = circuits.build("scalar_mult", k, a=a).evaluate_batch({"X": x})["Y"]
            failures += int(np.count_nonzero(y != a * x))
    adders = {a: bricks.build_scalar_mult(a, 6).count("adder") for a in (1, 2, 4, 8, 16)}
    verdict(8, failures == 0 and not any(adders.values()), f"{failures} failures, adders {adders}")


@pytest.mark.criterion(9, "variable multiplier exhaustive k<=4, seeded random n=1000 for k=5..8")
def test_criterion_09_variable_mult():
    exhaustive = sweep(SweepSpec("variable_mult", range(1, 5)))
    randomized = sweep(SweepSpec("variable_mult", range(5, 9), mode="random", samples=1000,
                                 seed=verify.DEFAULT_SEED))
    again = sweep(SweepSpec("variable_mult", range(5, 9), mode="random", samples=1000,
                            seed=verify.DEFAULT_SEED))
    ok = exhaustive.ok and randomized.ok and randomized.cases == 4000 and again.to_json() == randomized.to_json()
    verdict(9, ok, f"{exhaustive.failures}+{randomized.failures} failures")


@pytest.mark.criterion(10, "adder at A=B=2^k-1 decodes correctly at width k+1")
def test_criterion_10_overflow():
    bad = []
    for k in range(1, 17):
        lowered = circuits.build("adder", k)
        top = (1 << k) - 1
        if lowered.outputs["S"].width != k + 1 or lowered.evaluate(A=top, B=top)["S"] != 2 * top:
            bad.append(k)
    verdict(10, not bad, f"bad widths {bad}")


@pytest.mark.criterion(11, "byte-identical reruns, exact netlist round trip, encode/decode identity k<=16")
def test_criterion_11_determinism_and_round_trips():
    problems = []
    for name in verify.LIBRARY:
        for opts in verify.variants(name)[:4]:
            first, second = circuits.build(name, 4, **opts), circuits.build(name, 4, **opts)
            text = dumps_lowered(first)
            if text != dumps_lowered(second) or dumps_lowered(loads_lowered(text)) != text:
                problems.append(f"netlist {name} {opts}")
            operands = {op: 1 for op in circuits.get(name).operands}
            if raster_to_csv(first.raster(**operands)) != raster_to_csv(second.raster(**operands)):
                problems.append(f"raster {name} {opts}")
    spec = SweepSpec("minmax", (5,), mode="random", samples=300, options={"variant": "decay"})
    if sweep(spec).to_json() != sweep(spec).to_json():
        problems.append("report")
    for signedness in (UNSIGNED, TWOS_COMPLEMENT):
        for k in range(1, 17):
            lo, hi = value_range(k, signedness)
            values = np.arange(lo, hi + 1)
            trains = encode_batch(values, k, 2, k + 3, signedness)
            if not np.array_equal(decode_batch(trains, 2, k, signedness), values):
                problems.append(f"codec {signedness} k={k}")
    verdict(11, not problems, ", ".join(problems))


@pytest.mark.criterion(12, "each adder and mux mutation fails the exhaustive k=3 sweep")
def test_criterion_12_mutations():
    caught = {name: sweep(SweepSpec(circuit, (3,), mutation=name)).failures
              for name, (circuit, _) in MUTATIONS.items()}
    circuits_hit = {MUTATIONS[name][0] for name in caught}
    ok = all(n >= 1 for n in caught.values()) and circuits_hit == {"adder", "mux"}
    verdict(12, ok, str(caught))
