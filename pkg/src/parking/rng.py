"""Seeded, platform-independent random source.

Bits come from numpy's PCG64 bit generator (PCG XSL-RR 128/64), seeded
through ``SeedSequence(seed, spawn_key=(worker,))``.  Both the state
transition and the seeding procedure are fixed by numpy's stream
compatibility guarantee for bit generators.  Bounded integers are drawn
here, by rejection on raw 64-bit words, so they do not depend on numpy's
``Generator`` methods.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "pcg64+seedsequence/rejection-v1"
_TWO64 = 1 << 64


class RandomSource:
    def __init__(self, seed: int, worker: int = 0):
        if not 0 <= seed < _TWO64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.worker = int(worker)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.worker,))
        self._bits = np.random.PCG64(seq)

    def spawn(self, worker: int) -> "RandomSource":
        """Independent stream for ``worker``, derived from the master seed only."""
        return RandomSource(self.seed, worker)

    def describe(self) -> dict:
        return {"algorithm": ALGORITHM, "seed": str(self.seed), "worker": self.worker}

    def raw(self, size: int) -> np.ndarray:
        return self._bits.random_raw(size)

    def integers(self, bound, size: int) -> np.ndarray:
        """``size`` uniform draws from [0, bound) as int64; ``bound`` may be an array.

        Each bound must lie in [1, 2^63].
        """
        bound = np.broadcast_to(np.asarray(bound, dtype=np.uint64), (size,))
        if size and (bound.min() < 1 or bound.max() > np.uint64(1 << 63)):
            raise ValueError("bound must lie in [1, 2^63]")
        # reject words below 2^64 mod bound so that x % bound is exactly uniform
        threshold = (np.uint64(0) - bound) % bound
        out = np.empty(size, dtype=np.int64)
        todo = np.arange(size)
        while todo.size:
            words = self.raw(todo.size)
            ok = words >= threshold[todo]
            out[todo[ok]] = (words[ok] % bound[todo[ok]]).astype(np.int64)
            todo = todo[~ok]
        return out

    def below(self, bound: int) -> int:
        return int(self.integers(bound, 1)[0])

    def uniform(self, size: int) -> np.ndarray:
        """Doubles in [0, 1) from the top 53 bits."""
        return (self.raw(size) >> np.uint64(11)).astype(np.float64) * 2.0**-53
