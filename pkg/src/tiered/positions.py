"""Deterministic "semi-random" position stream shared by traces and benchmarks.

A 64-bit linear congruential generator (multiplier 6364136223846793005,
increment 1442695040888963407); a position is ``(state >> 16) % size``
after each step.  The compiled and pure-Python versions produce identical
streams.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1

_MUL = np.uint64(MULTIPLIER)
_INC = np.uint64(INCREMENT)
_SH = np.uint64(16)


def seed_state(seed: int) -> int:
    return (int(seed) * 0x9E3779B97F4A7C15 + 1) & _MASK64


class PositionStream:
    def __init__(self, seed: int) -> None:
        self.state = seed_state(seed)

    def next_raw(self) -> int:
        self.state = (self.state * MULTIPLIER + INCREMENT) & _MASK64
        return self.state >> 16

    def next(self, size: int) -> int:
        """Next position in ``[0, size)``."""
        return self.next_raw() % size

    def take(self, size: int, count: int) -> list[int]:
        return [self.next(size) for _ in range(count)]


@njit(cache=True, _nrt=False)
def lcg_step(state):
    return state * _MUL + _INC


@njit(cache=True, _nrt=False)
def lcg_pos(state, size):
    """Advance ``state`` and return (new state, position in [0, size))."""
    state = np.uint64(state) * _MUL + _INC
    return state, np.int64((state >> _SH) % np.uint64(size))
