"""Deterministic pseudo-random generator with a reproducible cross-platform stream.

The generator is xoshiro256** (Blackman & Vigna), seeded by feeding the u64
seed through splitmix64 four times to fill the 256-bit state.  Both algorithms
have published reference implementations, so any faithful port in any language
produces the identical u64 stream for the same seed.  Derived draws are pinned
to exact recipes so they are equally reproducible:

* ``uniform``: ``(next_u64() >> 11) * 2**-53`` in ``[0, 1)``.
* ``normals``: Box-Muller on consecutive uniform draws; the first uniform of a
  pair is shifted to ``((raw >> 11) + 1) * 2**-53`` in ``(0, 1]`` so the log is
  finite.  Pair ``i`` yields ``(cos, sin)`` values in that order.
* ``randbelow``: unbiased rejection sampling on the raw u64 stream.
* ``sample_indices``: Fisher-Yates prefix (sparse bookkeeping, identical output
  to shuffling the full index array).
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_INV53 = 2.0**-53


def _splitmix64_next(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """xoshiro256** stream with splitmix64 seeding.

    Instances are cheap; create one per operation that needs randomness and
    never share a stream between logically independent operations.
    """

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be a u64, got {seed}")
        s = []
        sm_state = seed
        for _ in range(4):
            out, sm_state = _splitmix64_next(sm_state)
            s.append(out)
        if not any(s):  # all-zero state is the one invalid xoshiro state
            s[0] = 1
        self._s = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV53

    def uniforms(self, n: int) -> list[float]:
        return [self.uniform() for _ in range(n)]

    def normals(self, n: int) -> list[float]:
        """n standard normal draws via Box-Muller on consecutive uniforms.

        An odd n consumes a full final pair and discards its sin half, so the
        stream position depends only on ceil(n/2).
        """
        out: list[float] = []
        for _ in range((n + 1) // 2):
            u1 = ((self.next_u64() >> 11) + 1) * _INV53  # (0, 1]
            u2 = (self.next_u64() >> 11) * _INV53
            r = math.sqrt(-2.0 * math.log(u1))
            out.append(r * math.cos(2.0 * math.pi * u2))
            out.append(r * math.sin(2.0 * math.pi * u2))
        return out[:n]

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n)."""
        if n <= 0:
            raise ValueError(f"n must be positive, got {n}")
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n): the prefix of a Fisher-Yates shuffle.

        Uses a displacement map instead of materializing range(n), but the
        result is bit-identical to shuffling the full array and taking [:k].
        """
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        displaced: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.randbelow(n - i)
            out.append(displaced.get(j, j))
            displaced[j] = displaced.get(i, i)
        return out

    def choice_weighted(self, weights) -> int:
        """Index drawn proportionally to non-negative weights.

        A zero total falls back to index 0 (callers guard this case when a
        different fallback is wanted).
        """
        total = float(sum(weights))
        if total <= 0.0:
            return 0
        r = self.uniform() * total
        acc = 0.0
        for i, w in enumerate(weights):
            acc += float(w)
            if r < acc:
                return i
        return len(weights) - 1
