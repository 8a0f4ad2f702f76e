"""Deterministic, portable pseudo-random generation.

Every random draw in this package flows through :class:`SplitMix64`, a
64-bit counter-based generator fully specified by three constants so that
any language with unsigned 64-bit arithmetic reproduces the same stream:

    state'  = (state + 0x9E3779B97F4A7C15) mod 2^64
    z       = state'
    z       = ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z       = ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output  = z xor (z >> 31)

Uniform doubles take the top 53 bits of the output, so the uniform stream
is bit-exact everywhere. Gaussian draws use the Box-Muller transform and
therefore inherit the platform's libm accuracy (identical in practice,
equal to within 1 ulp in the worst case).
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_TWO53_INV = 2.0 ** -53


class SplitMix64:
    """Counter-based 64-bit generator; see module docstring for the update."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed}")
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        """Uniform double in [low, high); exactly `low` when the interval is degenerate."""
        u = (self.next_u64() >> 11) * _TWO53_INV
        return low + (high - low) * u

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        """Gaussian draw via Box-Muller; consumes exactly two uniforms."""
        # First uniform shifted into (0, 1] so the log argument is never zero.
        u1 = ((self.next_u64() >> 11) + 1) * _TWO53_INV
        u2 = (self.next_u64() >> 11) * _TWO53_INV
        return mean + std * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
