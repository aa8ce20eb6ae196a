"""Exact uniform sampling from PF(m, n) by rotating circular parking.

Draw preferences uniformly from [n + 1]^m, park them on the (n + 1)-cycle,
pick one of the n - m + 1 empty spots uniformly and rotate it to n + 1.
The empty spots are found from prefix sums, not by simulating cars, so the
sampler shares no code with :func:`parking.pfcore.park`.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .pfcore import ParkingFunction
from .rng import RandomSource

DEFAULT_BATCH = 8192
_CELLS_PER_BATCH = 1 << 21  # bounds the (rows x 2(n+1)) working arrays


def _spot_counts(prefs: np.ndarray, spots: int) -> np.ndarray:
    rows, m = prefs.shape
    offsets = (np.arange(rows, dtype=np.int64) * spots)[:, None]
    flat = (prefs.astype(np.int64) - 1 + offsets).ravel()
    return np.bincount(flat, minlength=rows * spots).reshape(rows, spots)


def circular_empty_spots(prefs: np.ndarray, n: int) -> np.ndarray:
    """Boolean (rows, n + 1): spot k + 1 stays empty when parking on the (n + 1)-cycle.

    With S the prefix sums of (r_k - 1) continued over two laps, spot k is
    empty exactly when S reaches a strict new minimum there in the second lap.
    """
    spots = n + 1
    r = _spot_counts(prefs, spots)
    walk = np.cumsum(np.concatenate([r, r], axis=1) - 1, axis=1)
    walk = np.concatenate([np.zeros((walk.shape[0], 1), dtype=walk.dtype), walk], axis=1)
    prior_min = np.minimum.accumulate(walk, axis=1)
    second = walk[:, spots + 1 :]
    return second < prior_min[:, spots:-1]


def linear_holes(prefs: np.ndarray, n: int) -> np.ndarray:
    """Boolean (rows, n): spots never attempted, for rows that are parking functions."""
    r = _spot_counts(prefs, n) if prefs.shape[1] else np.zeros((prefs.shape[0], n), dtype=np.int64)
    walk = np.cumsum(r - 1, axis=1)
    walk = np.concatenate([np.zeros((walk.shape[0], 1), dtype=walk.dtype), walk], axis=1)
    prior_min = np.minimum.accumulate(walk, axis=1)
    return walk[:, 1:] < prior_min[:, :-1]


def sample_pf_batch(m: int, n: int, size: int, rng: RandomSource) -> np.ndarray:
    """``size`` independent uniform elements of PF(m, n), one per row (int64)."""
    if not 0 <= m <= n:
        raise InputError(f"need 0 <= m <= n, got m={m}, n={n}")
    if m == 0:
        return np.zeros((size, 0), dtype=np.int64)
    prefs = rng.integers(n + 1, size * m).reshape(size, m) + 1
    empty = circular_empty_spots(prefs, n)
    pick = rng.integers(n - m + 1, size)
    rank = np.cumsum(empty, axis=1)
    hole = np.argmax(rank == (pick + 1)[:, None], axis=1) + 1
    shift = (n + 1 - hole)[:, None]
    return (prefs - 1 + shift) % (n + 1) + 1


def sample_pf_stream(m, n, trials, rng: RandomSource, batch=DEFAULT_BATCH):
    """Yield batches totalling ``trials`` rows.

    The batch size adapts to n to bound memory.  It fixes how the raw stream
    is consumed, so it is part of the reproducibility contract.
    """
    batch = max(1, min(batch, _CELLS_PER_BATCH // (2 * (n + 1) + m)))
    done = 0
    while done < trials:
        size = min(batch, trials - done)
        yield sample_pf_batch(m, n, size, rng)
        done += size


def sample_pf(m: int, n: int, rng: RandomSource) -> ParkingFunction:
    row = sample_pf_batch(m, n, 1, rng)[0]
    return ParkingFunction(m, n, tuple(int(v) for v in row))


def lucky_counts(prefs: np.ndarray, n: int) -> np.ndarray:
    """Lucky cars per row, by parking all rows in lockstep."""
    rows, m = prefs.shape
    occupied = np.zeros((rows, n + 2), dtype=bool)
    lucky = np.zeros(rows, dtype=np.int64)
    idx = np.arange(rows)
    for car in range(m):
        pos = prefs[:, car].copy()
        taken = occupied[idx, pos]
        lucky += ~taken
        while taken.any():
            pos[taken] += 1
            taken = occupied[idx, pos]
        occupied[idx, pos] = True
    return lucky


def displacements(prefs: np.ndarray, n: int) -> np.ndarray:
    """Total displacement per row via C(n+1, 2) - sum(prefs) - sum(holes)."""
    holes = linear_holes(prefs, n)
    spots = np.arange(1, n + 1)
    return n * (n + 1) // 2 - prefs.sum(axis=1) - (holes * spots).sum(axis=1)


def repeats(prefs: np.ndarray) -> np.ndarray:
    return (prefs[:, 1:] == prefs[:, :-1]).sum(axis=1)
