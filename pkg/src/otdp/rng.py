"""Seeded pseudo-random number generation with a portable, documented algorithm.

Sampling must reproduce bit-for-bit across platforms and library versions, so
the generator is implemented here rather than delegated to a library whose
stream may change between releases.  The core is SplitMix64 (public-domain
constants, 64-bit state, golden-ratio increment followed by two xor-shift
multiplies), which passes standard statistical test batteries and needs only
integer arithmetic.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit generator. Same seed, same stream, everywhere."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) without modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # Rejection sampling on the top multiple of `bound`.
        limit = _MASK64 - (_MASK64 + 1) % bound
        while True:
            value = self.next_u64()
            if value <= limit:
                return value % bound

    def sample_without_replacement(self, n: int, size: int) -> list[int]:
        """`size` distinct indices from range(n), returned in ascending order.

        Partial Fisher-Yates: swap a uniformly chosen remaining element into
        each of the first `size` slots, then sort the selection so callers
        preserve original row order.
        """
        if not 0 <= size <= n:
            raise ValueError(f"cannot draw {size} items from {n}")
        pool = list(range(n))
        for i in range(size):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:size])


def derive_stream(seed: int, tag: int) -> SplitMix64:
    """Independent substream for (seed, tag); tags keep uses decorrelated."""
    return SplitMix64(_mix((seed ^ (tag * _GOLDEN)) & _MASK64))
