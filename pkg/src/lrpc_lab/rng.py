"""Deterministic random streams.

All randomness in the library flows through two primitives:

* ``splitmix64`` -- the standard SplitMix64 output mixing function.  It is
  used both to drive the irreducible-modulus search and to derive per-trial
  seeds.
* ``trial_rng(master_seed, trial_index)`` -- an independent ``random.Random``
  stream per (seed, trial) pair.  Because a trial's stream depends only on
  these two integers, simulation results are identical for any degree of
  parallelism or scheduling order.
"""

from __future__ import annotations

import random

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 mixing step applied to ``x`` (result in [0, 2^64))."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 generator (used for modulus search)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by rejection on 64-bit words."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound


def trial_seed(master_seed: int, trial_index: int) -> int:
    """64-bit seed of the stream belonging to one (master_seed, trial) pair."""
    return splitmix64(splitmix64(master_seed & _MASK64) ^ (((trial_index + 1) * _GOLDEN) & _MASK64))


def trial_rng(master_seed: int, trial_index: int) -> random.Random:
    """Per-trial ``random.Random``, independent of all other trials."""
    return random.Random(trial_seed(master_seed, trial_index))
