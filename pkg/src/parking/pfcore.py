"""Parking functions with m cars on n spots: validation, parking, statistics.

Cars and spots are 1-indexed throughout.  A sequence ``prefs`` of length m
with entries in [1, n] is a parking function when every car finds a spot
under the rule "go to your preferred spot, otherwise take the next free one
towards n".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .errors import CompatibilityError, InputError, NotAParkingFunction


def _check_ranges(prefs, m, n):
    if m < 0 or n < 0:
        raise InputError(f"negative size m={m}, n={n}")
    if m > n:
        raise InputError(f"more cars than spots: m={m} > n={n}")
    if len(prefs) != m:
        raise InputError(f"expected {m} preferences, got {len(prefs)}")
    for i, p in enumerate(prefs, 1):
        if not isinstance(p, int) or isinstance(p, bool):
            raise InputError(f"preference of car {i} is not an integer: {p!r}")
        if not 1 <= p <= n:
            raise InputError(f"preference of car {i} is {p}, outside [1, {n}]")


def _counts(prefs, n):
    r = [0] * (n + 1)
    for p in prefs:
        r[p] += 1
    return r


def is_parking_function(prefs: Sequence[int], m: int, n: int) -> bool:
    """Prefix counting criterion: #{k : prefs_k <= i} >= m - n + i for i > n - m."""
    _check_ranges(prefs, m, n)
    r = _counts(prefs, n)
    below = sum(r[1 : n - m + 1])
    for i in range(n - m + 1, n + 1):
        below += r[i]
        if below < m - n + i:
            return False
    return True


def is_parking_function_sorted(prefs: Sequence[int], m: int, n: int) -> bool:
    """Rearrangement criterion: the i-th smallest preference is at most n - m + i."""
    _check_ranges(prefs, m, n)
    return all(lam <= n - m + i for i, lam in enumerate(sorted(prefs), 1))


@dataclass(frozen=True)
class ParkingOutcome:
    slots: tuple[int, ...]
    displacements: tuple[int, ...]


def park(prefs: Sequence[int], m: int, n: int) -> ParkingOutcome:
    """Sequential parking.  Raises NotAParkingFunction naming the first car that fails."""
    _check_ranges(prefs, m, n)
    # nxt[s] is a free spot >= s (n + 1 means none); path-halving union-find
    nxt = list(range(n + 2))
    slots = []
    for car, p in enumerate(prefs, 1):
        s = p
        while nxt[s] != s:
            nxt[s] = nxt[nxt[s]]
            s = nxt[s]
        if s > n:
            raise NotAParkingFunction(car)
        slots.append(s)
        nxt[s] = s + 1
    return ParkingOutcome(tuple(slots), tuple(s - p for s, p in zip(slots, prefs)))


_TEXT = re.compile(r"^\s*(\d+)\s+(\d+)\s*:\s*([\d\s]*)$")


@dataclass(frozen=True)
class ParkingFunction:
    """A validated element of PF(m, n)."""

    m: int
    n: int
    prefs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefs", tuple(self.prefs))
        _check_ranges(self.prefs, self.m, self.n)
        if not is_parking_function(self.prefs, self.m, self.n):
            park(self.prefs, self.m, self.n)  # raises with the failing car

    @classmethod
    def of(cls, prefs, n=None):
        prefs = tuple(prefs)
        return cls(len(prefs), len(prefs) if n is None else n, prefs)

    @classmethod
    def parse(cls, text: str) -> "ParkingFunction":
        """Read the canonical form ``m n : p1 p2 ... pm``."""
        match = _TEXT.match(text)
        if match is None:
            raise InputError(f"cannot parse parking function {text!r}")
        m, n = int(match.group(1)), int(match.group(2))
        prefs = tuple(int(tok) for tok in match.group(3).split())
        return cls(m, n, prefs)

    def to_text(self) -> str:
        return f"{self.m} {self.n} :" + "".join(f" {p}" for p in self.prefs)

    def to_record(self) -> dict:
        return {"m": self.m, "n": self.n, "prefs": list(self.prefs)}

    def __str__(self):
        return self.to_text()

    def __len__(self):
        return self.m

    def outcome(self) -> ParkingOutcome:
        return park(self.prefs, self.m, self.n)


def displacement(pf: ParkingFunction) -> int:
    return sum(pf.outcome().displacements)


def lucky_count(pf: ParkingFunction) -> int:
    return sum(1 for d in pf.outcome().displacements if d == 0)


def specification(pf: ParkingFunction) -> tuple[int, ...]:
    """r_k = number of cars whose preferred spot is k, for k = 1..n."""
    return tuple(_counts(pf.prefs, pf.n)[1:])


def order_permutation(pf: ParkingFunction) -> tuple[int, ...]:
    """Stable rank of each preference: sigma_i is the position of prefs_i once sorted."""
    r = _counts(pf.prefs, pf.n)
    start = [0] * (pf.n + 2)
    for k in range(1, pf.n + 1):
        start[k + 1] = start[k] + r[k]
    sigma = []
    for p in pf.prefs:
        start[p] += 1
        sigma.append(start[p])
    return tuple(sigma)


def inverse_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, 1):
        inv[s - 1] = i
    return tuple(inv)


def queue_profile(pf: ParkingFunction) -> tuple[int, ...]:
    """Number of cars that try spot k (successfully or not), k = 1..n."""
    return _queue(specification(pf))


def _queue(r):
    y, prev = [], 0
    for rk in r:
        prev = rk if prev == 0 else prev - 1 + rk
        y.append(prev)
    return tuple(y)


def unattempted_spots(pf: ParkingFunction) -> tuple[int, ...]:
    return tuple(k for k, yk in enumerate(queue_profile(pf), 1) if yk == 0)


@dataclass(frozen=True)
class CompatiblePair:
    n: int
    r: tuple[int, ...]
    sigma: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(self.r))
        object.__setattr__(self, "sigma", tuple(self.sigma))

    @property
    def m(self):
        return len(self.sigma)


def check_compatible(pair: CompatiblePair) -> None:
    """Raise CompatibilityError unless the pair encodes an element of PF(m, n)."""
    n, r, sigma = pair.n, pair.r, pair.sigma
    m = len(sigma)
    if len(r) != n or any(rk < 0 for rk in r):
        raise CompatibilityError("shape", f"r must hold {n} non-negative counts")
    if sorted(sigma) != list(range(1, m + 1)):
        raise CompatibilityError("permutation", "sigma is not a permutation of [m]")
    if sum(r) != m:
        raise CompatibilityError("total", f"sum of r is {sum(r)}, expected m={m}")
    if m > n:
        raise CompatibilityError("total", f"m={m} exceeds n={n}")
    # sigma^{-1} must list each block 1 + r_1 + ... + r_{k-1} .. r_1 + ... + r_k left to right
    pos = inverse_permutation(sigma)
    hi = 0
    for k, rk in enumerate(r, 1):
        lo, hi = hi + 1, hi + rk
        for v in range(lo, hi):
            if pos[v - 1] > pos[v]:
                raise CompatibilityError(
                    "block order", f"values {v} and {v + 1} of block {k} appear out of order"
                )
    holes = [k for k, yk in enumerate(_queue(r), 1) if yk == 0]
    if len(holes) != n - m:
        raise CompatibilityError(
            "balance", f"queue empties {len(holes)} times, expected n - m = {n - m}"
        )
    # tail of the queue after the last hole must still be absorbed by spot n
    y = _queue(r)
    if n and y[-1] > 1:
        raise CompatibilityError("balance", "cars overflow past spot n")


def from_compatible_pair(pair: CompatiblePair) -> ParkingFunction:
    """Replace i in sigma by the i-th smallest term of 1^{r_1} ... n^{r_n}."""
    check_compatible(pair)
    word = [k for k, rk in enumerate(pair.r, 1) for _ in range(rk)]
    return ParkingFunction(pair.m, pair.n, tuple(word[s - 1] for s in pair.sigma))


def compatible_pair(pf: ParkingFunction) -> CompatiblePair:
    return CompatiblePair(pf.n, specification(pf), order_permutation(pf))


def balance_witness(r: Sequence[int], m: int) -> tuple[int, ...] | None:
    """Search for k_1 < ... < k_{n-m} satisfying the balance equalities and inequalities.

    Exponential search; used only to cross-check the queue-based hole computation.
    """
    n = len(r)
    prefix = [0]
    for rk in r:
        prefix.append(prefix[-1] + rk)
    if prefix[-1] != m:
        return None

    def ok_between(i, lo, hi):
        return all(prefix[j] > j - i - 1 for j in range(lo + 1, hi))

    def search(i, last):
        if i == n - m + 1:
            return ()
        if i == n - m:
            return () if ok_between(i, last, n + 1) else None
        for k in range(last + 1, n + 1):
            if prefix[k] == k - (i + 1) and ok_between(i, last, k):
                rest = search(i + 1, k)
                if rest is not None:
                    return (k,) + rest
        return None

    return search(0, 0)


@dataclass(frozen=True)
class SegmentDecomposition:
    holes: tuple[int, ...]
    segments: tuple[tuple[int, ...], ...]
    cars: tuple[tuple[int, ...], ...]

    @property
    def bounds(self):
        """(k_i, k_{i+1}) pairs including the sentinels 0 and n + 1."""
        ks = (0,) + self.holes + (self.n_spots + 1,)
        return tuple(zip(ks[:-1], ks[1:]))

    @property
    def n_spots(self):
        return sum(len(s) for s in self.segments) + len(self.holes)


def segment_decomposition(pf: ParkingFunction) -> SegmentDecomposition:
    """Cut at unattempted spots; segment i is translated down by its left hole.

    ``cars[i]`` lists, in increasing order, the car indices whose preference
    falls in segment i, so ``segments[i][t]`` is the translated preference of
    car ``cars[i][t]``.
    """
    holes = unattempted_spots(pf)
    ks = (0,) + holes + (pf.n + 1,)
    seg_of = [0] * (pf.n + 2)
    for i in range(len(ks) - 1):
        for spot in range(ks[i] + 1, ks[i + 1]):
            seg_of[spot] = i
    segs = [[] for _ in range(len(ks) - 1)]
    cars = [[] for _ in range(len(ks) - 1)]
    for car, p in enumerate(pf.prefs, 1):
        i = seg_of[p]
        segs[i].append(p - ks[i])
        cars[i].append(car)
    return SegmentDecomposition(holes, tuple(map(tuple, segs)), tuple(map(tuple, cars)))


def reassemble(dec: SegmentDecomposition) -> ParkingFunction:
    ks = (0,) + dec.holes
    m = sum(len(s) for s in dec.segments)
    prefs = [0] * m
    for k, seg, cars in zip(ks, dec.segments, dec.cars):
        for p, car in zip(seg, cars):
            prefs[car - 1] = p + k
    return ParkingFunction(m, dec.n_spots, tuple(prefs))


def classical_cm(word: Sequence[int]) -> int:
    """Critical left-to-right maxima of a classical parking function."""
    length = len(word)
    count = 0
    best = 0
    for j in word:
        if j > best:
            best = j
            smaller = sum(1 for v in word if v < j)
            larger = sum(1 for v in word if v > j)
            if smaller == j - 1 and larger == length - j:
                count += 1
    return count


def critical_lr_maxima(pf: ParkingFunction) -> int:
    return sum(classical_cm(seg) for seg in segment_decomposition(pf).segments)


def critical_lr_maxima_untranslated(pf: ParkingFunction) -> int:
    """Same statistic read off the raw preferences, without translating segments.

    A term prefs_i = j is counted when it beats every earlier preference in
    its own segment and splits the whole sequence into exactly
    j - 1 - #{holes < j} smaller and n - j - #{holes > j} larger terms.
    """
    holes = set(unattempted_spots(pf))
    holes_below = [0] * (pf.n + 2)
    for k in range(1, pf.n + 1):
        holes_below[k] = holes_below[k - 1] + (k in holes)
    count = 0
    best = {}
    for j in pf.prefs:
        seg = holes_below[j]
        if j <= best.get(seg, 0):
            continue
        best[seg] = j
        smaller = sum(1 for v in pf.prefs if v < j)
        larger = sum(1 for v in pf.prefs if v > j)
        if smaller == j - 1 - holes_below[j] and larger == pf.n - j - (len(holes) - holes_below[j]):
            count += 1
    return count


def multiparking_correspondence(g: Sequence[int], m: int, n: int):
    """Values of a K_{n+1} multiparking function on vertices n-m+1..n, shifted by one.

    Returns the candidate preference tuple and whether it lies in PF(m, n).
    """
    if len(g) != m or any(v < 0 for v in g):
        raise InputError("g must hold m non-negative values")
    prefs = tuple(v + 1 for v in g)
    if m > n:
        raise InputError(f"m={m} > n={n}")
    valid = all(p <= n for p in prefs) and is_parking_function(prefs, m, n)
    return prefs, valid


def is_multiparking(g: Sequence[int], m: int, n: int) -> bool:
    """Subset criterion on K_{n+1} with roots 0..n-m, by brute force over subsets.

    For every non-empty set U of non-root vertices some j in U has more edges
    leaving U than g(j).  In K_{n+1} a vertex of U has n + 1 - |U| such edges.
    Subsets containing a root are satisfied trivially.
    """
    for mask in range(1, 1 << m):
        size = bin(mask).count("1")
        if not any(mask >> t & 1 and n + 1 - size > g[t] for t in range(m)):
            return False
    return True


def disp_from_holes(pf: ParkingFunction) -> int:
    return comb(pf.n + 1, 2) - sum(pf.prefs) - sum(unattempted_spots(pf))
