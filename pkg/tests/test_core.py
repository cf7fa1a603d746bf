from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reference import reference_run
from spikestream.core import (
    ADDITIVE,
    MULTIPLICATIVE,
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


NOT_NEURON = NeuronConfig(threshold=1, leak_mode=ADDITIVE, leak_value=1, reset_potential=0)


def not_network():
    return Network([NOT_NEURON], input_taps={"x": Tap(0, -1)})


def test_not_neuron_spikes_without_input():
    net = Network([NOT_NEURON])
    state = SimState(net)
    assert step(net, state)[0, 0]
    assert state.potentials()[0, 0] == 0


def test_not_neuron_input_cancels_leak():
    net = Network([NOT_NEURON])
    state = SimState(net)
    spikes = step(net, state, external=np.array([[-1]]))
    assert not spikes[0, 0]
    assert state.potentials()[0, 0] == 0


def test_multiplicative_decay_halves():
    net = Network([NeuronConfig(threshold=100, leak_mode=MULTIPLICATIVE, leak_value=0.5,
                                initial_potential=4)], denominator=2)
    state = SimState(net)
    step(net, state)
    assert state.potentials()[0, 0] == 2
    step(net, state)
    assert state.potentials()[0, 0] == 1


def test_empty_network_gives_empty_raster():
    assert run(Network(), {}, 5) == Raster((), 5)


def test_relay_passes_with_unit_delay():
    net = Network([NeuronConfig.gate(1)], input_taps={"x": Tap(0)})
    assert run(net, {"x": [0, 2]}, 5).times(0) == [1, 3]


def test_not_network_matches_hand_oracle():
    # Inputs {0,2} land at {1,3}; without input the neuron fires, so the
    # output is {0,2}: the complement of the arrival window [1,4) plus t=0.
    net = not_network()
    raster = run(net, {"x": [0, 2]}, 4)
    assert set(raster.events) == reference_run(net, {"x": [0, 2]}, 4) == {(0, 0), (2, 0)}


@pytest.mark.parametrize("k", range(1, 9))
def test_not_dynamics_complement_every_stream(k):
    net = not_network()
    d = 2
    horizon = d + k + 2
    streams = np.array(list(product([0, 1], repeat=k)), dtype=bool)
    arrays = np.zeros((len(streams), horizon), dtype=bool)
    arrays[:, d:d + k] = streams
    trace = run_batch(net, {"x": arrays}, horizon)
    window = trace[:, d + 1:d + 1 + k, 0]
    assert np.array_equal(window, ~streams)


def test_unknown_input_is_rejected():
    with pytest.raises(NetworkError):
        run(not_network(), {"y": [0]}, 3)


@pytest.mark.parametrize("horizon", [0, -1])
def test_non_positive_horizon_is_rejected(horizon):
    with pytest.raises(ValueError):
        run(not_network(), {}, horizon)


@pytest.mark.parametrize("bad", [
    dict(synapses=[Synapse(0, 3, 1)]),
    dict(input_taps={"x": Tap(4)}),
    dict(output_taps={"y": 2}),
    dict(denominator=3),
])
def test_malformed_network_rejected(bad):
    with pytest.raises(NetworkError):
        Network([NeuronConfig.gate(1)], **bad)


def test_zero_delay_synapse_rejected():
    with pytest.raises(NetworkError):
        Synapse(0, 0, 1, 0)


def test_multiplicative_leak_range_checked():
    with pytest.raises(NetworkError):
        NeuronConfig(leak_mode=MULTIPLICATIVE, leak_value=1.5)


def test_unrepresentable_fraction_rejected():
    with pytest.raises(NetworkError):
        Network([NeuronConfig(threshold=Fraction(1, 3))], denominator=4)


def test_self_synapse_allowed():
    net = Network([NeuronConfig(threshold=1, leak_mode=MULTIPLICATIVE, leak_value=1,
                                initial_potential=1)], [Synapse(0, 0, 1)])
    assert run(net, {}, 4).times(0) == [0, 1, 2, 3]


# -- random networks ----------------------------------------------------------

@st.composite
def networks(draw):
    n = draw(st.integers(1, 6))
    neurons = []
    for _ in range(n):
        mode = draw(st.sampled_from([ADDITIVE, MULTIPLICATIVE]))
        leak = (draw(st.integers(-2, 2)) if mode == ADDITIVE
                else draw(st.sampled_from([0, 0.25, 0.5, 0.75, 1])))
        neurons.append(NeuronConfig(
            threshold=draw(st.integers(-1, 4)),
            leak_mode=mode,
            leak_value=leak,
            reset_potential=draw(st.integers(-2, 1)),
            initial_potential=draw(st.integers(-2, 3)),
        ))
    synapses = draw(st.lists(
        st.builds(Synapse, st.integers(0, n - 1), st.integers(0, n - 1),
                  st.integers(-3, 3), st.integers(1, 4)),
        max_size=12,
    ))
    return Network(neurons, synapses, input_taps={"in": Tap(0)}, denominator=1024)


input_times = st.lists(st.integers(0, 11), max_size=6, unique=True)


@settings(max_examples=150, deadline=None)
@given(networks(), input_times)
def test_simulator_matches_reference(net, times):
    assert set(run(net, {"in": times}, 12).events) == reference_run(net, {"in": times}, 12)


@settings(max_examples=50, deadline=None)
@given(networks(), input_times)
def test_runs_are_deterministic(net, times):
    assert run(net, {"in": times}, 12) == run(net, {"in": times}, 12)


@settings(max_examples=60, deadline=None)
@given(networks(), input_times, st.randoms())
def test_permuting_neurons_permutes_raster(net, times, rnd):
    order = list(range(net.size))
    rnd.shuffle(order)
    permuted = net.permuted(order)
    new_id = {old: new for new, old in enumerate(order)}
    original = run(net, {"in": times}, 12)
    expected = {(t, new_id[n]) for t, n in original.events}
    assert set(run(permuted, {"in": times}, 12).events) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 6))
def test_delay_causality(delay, t_in):
    net = Network([NeuronConfig.gate(1), NeuronConfig.gate(1)], [Synapse(0, 1, 1, delay)],
                  input_taps={"in": Tap(0)})
    raster = run(net, {"in": [t_in]}, 20)
    (t0,), (t1,) = raster.times(0), raster.times(1)
    assert t1 == t0 + delay > t0


@settings(max_examples=100, deadline=None)
@given(st.integers(-1000, 1000), st.sampled_from([0, 0.125, 0.5, 0.875, 1]))
def test_decay_never_grows_potential(v0, decay):
    net = Network([NeuronConfig(threshold=10 ** 6, leak_mode=MULTIPLICATIVE, leak_value=decay,
                                initial_potential=v0)], denominator=8)
    state = SimState(net)
    previous = abs(v0)
    for _ in range(12):
        step(net, state)
        current = abs(state.potentials()[0, 0])
        assert current <= previous
        previous = current


def test_batch_rows_are_independent():
    net = not_network()
    arrays = np.array([[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]], dtype=bool)
    trace = run_batch(net, {"x": arrays}, 5)
    for row in range(2):
        single = run(net, {"x": list(np.nonzero(arrays[row])[0])}, 5)
        assert Raster.from_mask(trace[row]) == single
