"""Little-endian temporal binary coding.

A ``width``-bit value occupies ``width`` consecutive timesteps of one neuron
starting at ``offset``; bit ``i`` (LSB first) is a spike at ``offset + i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Raster

UNSIGNED = "unsigned"
TWOS_COMPLEMENT = "twos_complement"
SIGNEDNESS = (UNSIGNED, TWOS_COMPLEMENT)


def value_range(width: int, signedness: str = UNSIGNED) -> tuple[int, int]:
    """Inclusive ``(lo, hi)`` of values representable in ``width`` bits."""
    if width < 1:
        raise ValueError(f"width must be positive, got {width}")
    if signedness == UNSIGNED:
        return 0, (1 << width) - 1
    if signedness == TWOS_COMPLEMENT:
        return -(1 << (width - 1)), (1 << (width - 1)) - 1
    raise ValueError(f"unknown signedness {signedness!r}")


def check_range(value: int, width: int, signedness: str = UNSIGNED) -> None:
    lo, hi = value_range(width, signedness)
    if not lo <= value <= hi:
        raise ValueError(f"{value} does not fit in {width} bits ({signedness})")


def encode(value: int, width: int, offset: int = 0, signedness: str = UNSIGNED) -> list[int]:
    """Spike times carrying ``value``."""
    check_range(value, width, signedness)
    if offset < 0:
        raise ValueError("offset must be non-negative")
    pattern = value & ((1 << width) - 1)
    return [offset + i for i in range(width) if pattern >> i & 1]


def bits_to_int(bits, signedness: str = UNSIGNED) -> int:
    width = len(bits)
    value = sum(1 << i for i, b in enumerate(bits) if b)
    if signedness == TWOS_COMPLEMENT and width and bits[-1]:
        value -= 1 << width
    return value


def decode(raster: Raster, neuron: int, offset: int, width: int, signedness: str = UNSIGNED) -> int:
    """Read ``width`` bits of ``neuron`` starting at ``offset``; other spikes are ignored."""
    if raster.horizon < offset + width:
        raise ValueError(
            f"raster horizon {raster.horizon} ends before the window [{offset}, {offset + width})"
        )
    times = set(raster.times(neuron))
    return bits_to_int([offset + i in times for i in range(width)], signedness)


def extend(width: int) -> int:
    """Width that absorbs one carry out of a ``width``-bit stream."""
    return width + 1


def encode_batch(values, width: int, offset: int, horizon: int, signedness: str = UNSIGNED) -> np.ndarray:
    """Encode an array of values into a ``(batch, horizon)`` spike mask."""
    values = np.asarray(values, dtype=np.int64)
    lo, hi = value_range(width, signedness)
    if values.size and (values.min() < lo or values.max() > hi):
        raise ValueError(f"values out of range for {width} bits ({signedness})")
    if offset < 0 or offset + width > horizon:
        raise ValueError("encoding window does not fit the horizon")
    out = np.zeros((values.shape[0], horizon), dtype=bool)
    pattern = values & ((1 << width) - 1)
    for i in range(width):
        out[:, offset + i] = (pattern >> i) & 1
    return out


def decode_batch(trains: np.ndarray, offset: int, width: int, signedness: str = UNSIGNED) -> np.ndarray:
    """Decode a ``(batch, horizon)`` spike mask into an int64 array."""
    window = trains[:, offset:offset + width].astype(np.int64)
    if window.shape[1] != width:
        raise ValueError("decode window runs past the horizon")
    values = window @ (np.int64(1) << np.arange(width, dtype=np.int64))
    if signedness == TWOS_COMPLEMENT:
        values = np.where(window[:, -1] == 1, values - (np.int64(1) << width), values)
    return values


@dataclass(frozen=True)
class BitStream:
    value: int
    width: int
    offset: int = 0
    signedness: str = UNSIGNED

    def __post_init__(self):
        check_range(self.value, self.width, self.signedness)
        if self.offset < 0:
            raise ValueError("offset must be non-negative")

    def spikes(self) -> list[int]:
        return encode(self.value, self.width, self.offset, self.signedness)

    def shifted(self, delay: int) -> "BitStream":
        return BitStream(self.value, self.width, self.offset + delay, self.signedness)

    def extended(self) -> "BitStream":
        return BitStream(self.value, extend(self.width), self.offset, self.signedness)

    @classmethod
    def read(cls, raster: Raster, neuron: int, offset: int, width: int,
             signedness: str = UNSIGNED) -> "BitStream":
        return cls(decode(raster, neuron, offset, width, signedness), width, offset, signedness)
