"""Portable pseudo-random numbers for reproducible layouts and fixtures.

A 32-bit linear congruential recurrence,

    x <- (1664525 * x + 1013904223) mod 2**32

deliberately tiny so that any reimplementation (a browser viewer, a
notebook, another language) reproduces the exact same draw sequence and
therefore the exact same layouts, bit for bit.
"""

from __future__ import annotations

import math

_MULT = 1664525
_INC = 1013904223
_MOD = 1 << 32
_MASK = _MOD - 1


class Lcg:
    """Deterministic uniform source.

    Seeds may be any 64-bit integer; the high half is folded into the low
    half so distinct wide seeds stay distinct.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = (seed ^ (seed >> 32)) & _MASK

    def next_u32(self) -> int:
        self.state = (_MULT * self.state + _INC) & _MASK
        return self.state

    def uniform(self) -> float:
        """Next float in [0, 1)."""
        return self.next_u32() / _MOD

    def below(self, n: int) -> int:
        """Integer in [0, n). Modulo bias is irrelevant at our scales."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        return self.next_u32() % n

    def poisson(self, mean: float) -> int:
        """Knuth's product method; adequate for the small means we use."""
        if mean <= 0:
            return 0
        limit = math.exp(-mean)
        k = 0
        p = 1.0
        while True:
            p *= self.uniform()
            if p <= limit:
                return k
            k += 1
