"""Deterministic random streams and seed splitting.

All stochastic code in this package draws from :class:`RandomStream`, a
SplitMix64 generator.  The generator is ~15 lines of integer arithmetic,
bit-exact on every platform, and trivially replicated inside compiled
kernels, which is what makes suite results reproducible regardless of how
trials are scheduled.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 output function: one increment-and-finalize step.

    mix64(z) = finalize(z + GOLDEN) with the standard xorshift-multiply
    finalizer (constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB).
    """
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def seed_split(base_seed: int, f: int, k: int) -> int:
    """Derive the 64-bit seed for trial ``k`` of true-hypothesis ``f``.

    Bit-exact definition:

        s = mix64(base_seed)
        s = mix64(s XOR (f + GOLDEN))
        s = mix64(s XOR (k + GOLDEN))

    with GOLDEN = 0x9E3779B97F4A7C15 and all arithmetic mod 2^64.
    Distinct (f, k) pairs get statistically independent streams without
    any coordination between workers.
    """
    s = mix64(base_seed & _MASK64)
    s = mix64(s ^ ((f + _GOLDEN) & _MASK64))
    s = mix64(s ^ ((k + _GOLDEN) & _MASK64))
    return s


class RandomStream:
    """SplitMix64 stream of uniform doubles in [0, 1).

    State advances by the golden-ratio increment per draw; the double is
    the top 53 bits of the finalized state.  A stream must have a single
    owner at a time (no internal locking).
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    @property
    def state(self) -> int:
        return self._state
