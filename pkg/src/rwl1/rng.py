"""splitmix64 generator: the reproducibility backbone of the benchmark suite.

Pure-integer implementation so identical seeds regenerate identical
instances in any environment.  The unit-interval mapping uses the top 53
bits offset by half a ulp, which keeps every draw strictly inside (0, 1)
and so keeps downstream log/Box-Muller transforms free of edge cases.
"""

from __future__ import annotations

__all__ = ["SplitMix64", "mix64"]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_UNIT = 2.0 ** -53


def mix64(value: int) -> int:
    """One splitmix64 output for the given state value (stateless form)."""
    z = (value + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """64-bit state; full 2^64 period; one multiply-xorshift mix per output."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform double in the open interval (0, 1)."""
        return ((self.next_u64() >> 11) + 0.5) * _UNIT

    def next_below(self, bound: int) -> int:
        """Integer in [0, bound) by modulo reduction (bias < 2^-40 for our bounds)."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        return self.next_u64() % bound
