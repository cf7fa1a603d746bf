import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spikestream import circuits
from spikestream.core import Raster
from spikestream.streams import (
    TWOS_COMPLEMENT,
    UNSIGNED,
    BitStream,
    decode,
    decode_batch,
    encode,
    encode_batch,
    extend,
    value_range,
)


def raster_of(times, horizon=40, neuron=0):
    return Raster(tuple((t, neuron) for t in times), horizon)


def test_encode_examples():
    assert encode(5, 4, 0) == [0, 2]
    assert encode(0, 4, 0) == []
    assert encode(-2, 4, 3, TWOS_COMPLEMENT) == [4, 5, 6]


def test_decode_examples():
    assert decode(raster_of([0, 2]), 0, 0, 4) == 5
    assert decode(raster_of([]), 0, 7, 5) == 0
    assert decode(raster_of([4, 5, 6]), 0, 3, 4, TWOS_COMPLEMENT) == -2


def test_decode_ignores_spikes_outside_window():
    assert decode(raster_of([0, 3, 4, 5, 9]), 0, 3, 2) == 3


def test_decode_needs_horizon_to_cover_window():
    with pytest.raises(ValueError):
        decode(Raster((), 5), 0, 3, 4)


@pytest.mark.parametrize("value,width,signedness", [(16, 4, UNSIGNED), (-1, 4, UNSIGNED),
                                                    (8, 4, TWOS_COMPLEMENT), (-9, 4, TWOS_COMPLEMENT)])
def test_out_of_range_values_rejected(value, width, signedness):
    with pytest.raises(ValueError):
        encode(value, width, 0, signedness)


def test_extend_keeps_unsigned_value():
    assert extend(3) == 4
    assert decode(raster_of(encode(7, 3)), 0, 0, 4) == 7
    assert decode(raster_of(encode(5, 4)), 0, 0, 8) == 5


def test_adder_overflow_needs_extension_bit():
    lowered = circuits.build("adder", 3)
    out = lowered.outputs["S"]
    raster = lowered.raster(A=7, B=1)
    assert decode(raster, out.neuron, out.offset, 3) == 0
    assert decode(raster, out.neuron, out.offset, 4) == 8


@pytest.mark.parametrize("signedness", [UNSIGNED, TWOS_COMPLEMENT])
@pytest.mark.parametrize("k", range(1, 9))
def test_round_trip_exhaustive(k, signedness):
    lo, hi = value_range(k, signedness)
    for v in range(lo, hi + 1):
        assert decode(raster_of(encode(v, k, 2, signedness)), 0, 2, k, signedness) == v


@given(st.data(), st.integers(9, 16), st.sampled_from([UNSIGNED, TWOS_COMPLEMENT]))
def test_round_trip_wide(data, k, signedness):
    lo, hi = value_range(k, signedness)
    v = data.draw(st.integers(lo, hi))
    assert BitStream.read(raster_of(encode(v, k, 0, signedness)), 0, 0, k, signedness).value == v


@given(st.integers(0, 255), st.integers(0, 10))
def test_offset_equivariance(v, d):
    base = encode(v, 8, 0)
    assert encode(v, 8, d) == [t + d for t in base]
    assert decode(raster_of(encode(v, 8, d)), 0, d, 8) == v


@given(st.integers(1, 12), st.data())
def test_delay_by_one_doubles(k, data):
    v = data.draw(st.integers(0, 2 ** k - 1))
    delayed = BitStream(v, k).shifted(1)
    assert decode(raster_of(delayed.spikes()), 0, 0, k + 1) == 2 * v


@pytest.mark.parametrize("signedness", [UNSIGNED, TWOS_COMPLEMENT])
def test_batch_coding_matches_scalar(signedness):
    k = 6
    lo, hi = value_range(k, signedness)
    values = np.arange(lo, hi + 1)
    trains = encode_batch(values, k, 3, 12, signedness)
    for row, v in zip(trains, values):
        assert list(np.nonzero(row)[0]) == encode(int(v), k, 3, signedness)
    assert np.array_equal(decode_batch(trains, 3, k, signedness), values)


def test_bitstream_extension_keeps_value():
    s = BitStream(5, 3, offset=2)
    assert s.extended().width == 4
    assert s.extended().spikes() == s.spikes()
