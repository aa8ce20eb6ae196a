"""Rooted spanning forests with fixed roots and their bijections with PF(m, n).

A forest in F(m + s, s) has roots ``01 .. 0s`` and non-root vertices
``1 .. m``.  It is stored as a predecessor map: ``parent[j - 1]`` is the
predecessor of vertex j, encoded as a positive integer for a non-root vertex
and as ``-i`` for root ``0i``.
"""

from __future__ import annotations

import enum
import re
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .config import resolve_cap
from .errors import InputError, ResourceLimit
from .pfcore import (
    CompatiblePair,
    ParkingFunction,
    critical_lr_maxima,
    displacement,
    from_compatible_pair,
    inverse_permutation,
    park,
    segment_decomposition,
)


class BfsVersion(enum.Enum):
    LEVEL_ORDER = "bfs1"  # all roots first, then level by level
    TREE_BY_TREE = "bfs2"  # each tree in BFS order before the next root


def root_name(v: int) -> str:
    return f"0{-v}" if v < 0 else str(v)


@dataclass(frozen=True)
class RootedForest:
    s: int
    m: int
    parent: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))
        if self.s < 1:
            raise InputError("a forest needs at least one root")
        if len(self.parent) != self.m:
            raise InputError(f"expected {self.m} predecessors, got {len(self.parent)}")
        for j, p in enumerate(self.parent, 1):
            if p == 0 or p < -self.s or p > self.m or p == j:
                raise InputError(f"vertex {j} has invalid predecessor {p}")
        for j in range(1, self.m + 1):
            v, steps = j, 0
            while v > 0:
                v = self.parent[v - 1]
                steps += 1
                if steps > self.m:
                    raise InputError(f"cycle through vertex {j}")

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        """Successor lists keyed by vertex (roots negative), increasing label order."""
        kids = {v: [] for v in range(-self.s, self.m + 1) if v != 0}
        for j, p in enumerate(self.parent, 1):
            kids[p].append(j)
        return {v: tuple(c) for v, c in kids.items()}

    def root_of(self, j: int) -> int:
        while j > 0:
            j = self.parent[j - 1]
        return -j

    def trees(self) -> tuple[tuple[int, ...], ...]:
        """Non-root vertex sets of the trees rooted at 01 .. 0s, each sorted."""
        out = [[] for _ in range(self.s)]
        for j in range(1, self.m + 1):
            out[self.root_of(j) - 1].append(j)
        return tuple(map(tuple, out))

    def to_text(self) -> str:
        body = "".join(f" {j}->{root_name(p)}" for j, p in enumerate(self.parent, 1))
        return f"{self.s} {self.m} :{body}"

    @classmethod
    def parse(cls, text: str) -> "RootedForest":
        """Read ``s m : j->parent ...``; roots are written 01, 02, ..."""
        head, sep, body = text.partition(":")
        if not sep:
            raise InputError(f"cannot parse forest {text!r}")
        try:
            s, m = (int(t) for t in head.split())
        except ValueError:
            raise InputError(f"cannot parse forest header {head!r}") from None
        parent = [None] * m
        for tok in body.split():
            match = re.fullmatch(r"(\d+)->(0?\d+)", tok)
            if match is None:
                raise InputError(f"bad edge {tok!r}")
            j, p = int(match.group(1)), match.group(2)
            if not 1 <= j <= m or parent[j - 1] is not None:
                raise InputError(f"bad or repeated vertex in {tok!r}")
            parent[j - 1] = -int(p) if p.startswith("0") else int(p)
        if None in parent:
            raise InputError("every non-root vertex needs a predecessor")
        return cls(s, m, tuple(parent))

    def to_dot(self, name="forest") -> str:
        lines = [f"digraph {name} {{"]
        for i in range(1, self.s + 1):
            lines.append(f'  "0{i}" [shape=circle, style=filled, fillcolor=gray];')
        for j in range(1, self.m + 1):
            lines.append(f'  "{j}" [shape=circle];')
        for j, p in enumerate(self.parent, 1):
            lines.append(f'  "{root_name(p)}" -> "{j}";')
        lines.append("}")
        return "\n".join(lines)


def inversions(forest: RootedForest) -> int:
    """Pairs i < j in one tree with j on the path from the root to i."""
    count = 0
    for i in range(1, forest.m + 1):
        v = forest.parent[i - 1]
        while v > 0:
            if v > i:
                count += 1
            v = forest.parent[v - 1]
    return count


def bfs_order(forest: RootedForest, version: BfsVersion) -> list[int]:
    kids = forest.children
    roots = [-i for i in range(1, forest.s + 1)]
    if version is BfsVersion.LEVEL_ORDER:
        starts = [roots]
    else:
        starts = [[r] for r in roots]
    order = []
    for start in starts:
        queue = deque(start)
        while queue:
            v = queue.popleft()
            order.append(v)
            queue.extend(kids[v])
    return order


def forest_to_pf(forest: RootedForest, version: BfsVersion = BfsVersion.LEVEL_ORDER) -> ParkingFunction:
    order = bfs_order(forest, version)
    n = forest.m + forest.s - 1
    kids = forest.children
    r = tuple(len(kids[v]) for v in order[:n])
    sigma = [v for v in order if v > 0]
    return from_compatible_pair(CompatiblePair(n, r, inverse_permutation(sigma)))


def _cars_by_pref(pf):
    by = [[] for _ in range(pf.n + 1)]
    for car, p in enumerate(pf.prefs, 1):
        by[p].append(car)
    return by


def pf_to_forest(pf: ParkingFunction, version: BfsVersion = BfsVersion.LEVEL_ORDER) -> RootedForest:
    """The k-th vertex in BFS order adopts the cars preferring spot k."""
    s = pf.n - pf.m + 1
    by = _cars_by_pref(pf)
    parent = [0] * pf.m
    if version is BfsVersion.LEVEL_ORDER:
        order = [-i for i in range(1, s + 1)]
        for k in range(1, pf.n + 1):
            for car in by[k]:
                parent[car - 1] = order[k - 1]
                order.append(car)
    else:
        queue = deque()
        next_root = 1
        for k in range(1, pf.n + 1):
            if queue:
                v = queue.popleft()
            else:
                v = -next_root
                next_root += 1
            for car in by[k]:
                parent[car - 1] = v
                queue.append(car)
    return RootedForest(s, pf.m, tuple(parent))


# auxiliary-forest construction: displacement becomes inversion count


def _aux_tree(tau):
    """Predecessor of k is the first larger entry to its right in tau, else the root (0)."""
    pred = {}
    stack = []
    for k in reversed(tau):
        while stack and stack[-1] < k:
            stack.pop()
        pred[k] = stack[-1] if stack else 0
        stack.append(k)
    return pred


def _kids(pred, size):
    kids = {v: [] for v in range(size + 1)}
    for k, p in pred.items():
        kids[p].append(k)
    for v in kids:
        kids[v].sort()
    return kids


def _subtree(kids, v):
    out, stack = [], [v]
    while stack:
        u = stack.pop()
        out.append(u)
        stack.extend(kids[u])
    return out


def _knuth_tree(word):
    """Relabelled tree for one classical segment, as {local label: parent label (0 = root)}."""
    size = len(word)
    slots = park(word, size, size).slots
    tau = [0] * size
    for car, spot in enumerate(slots, 1):
        tau[spot - 1] = car
    pred = _aux_tree(tau)
    kids = _kids(pred, size)
    label = {v: v for v in range(1, size + 1)}
    holder = dict(label)  # label -> vertex currently carrying it
    stack = list(reversed(kids[0]))
    while stack:
        v = stack.pop()
        labels = sorted(label[u] for u in _subtree(kids, v))
        target = labels[slots[v - 1] - word[v - 1]]
        w = holder[target]
        label[v], label[w] = label[w], label[v]
        holder[label[v]], holder[label[w]] = v, w
        stack.extend(sorted(kids[v], key=label.get, reverse=True))
    return {label[v]: (label[p] if p else 0) for v, p in pred.items()}


def _knuth_word(tree_parent):
    """Inverse of _knuth_tree: {label: parent label (0 = root)} -> classical word."""
    size = len(tree_parent)
    kids = _kids(tree_parent, size)
    final_sets = {v: sorted(_subtree(kids, v)) for v in range(1, size + 1)}
    # forward relabelling is a product of value transpositions; track it as T(aux) = current
    fwd = {a: a for a in range(1, size + 1)}
    back = dict(fwd)
    aux, disp = {}, {}
    stack = list(kids[0])
    while stack:
        v = stack.pop()
        span = final_sets[v]
        a = max(back[x] for x in span)
        aux[v] = a
        disp[a] = bisect_left(span, v)
        c = fwd[a]
        if c != v:
            a_c, a_v = back[c], back[v]
            fwd[a_c], fwd[a_v] = v, c
            back[v], back[c] = a_c, a_v
        stack.extend(kids[v])
    aux_pred = {aux[v]: (aux[p] if p else 0) for v, p in tree_parent.items()}
    aux_kids = _kids(aux_pred, size)
    pre = []
    stack = list(reversed(aux_kids[0]))
    while stack:
        v = stack.pop()
        pre.append(v)
        stack.extend(reversed(aux_kids[v]))
    tau = pre[::-1]
    word = [0] * size
    for spot, car in enumerate(tau, 1):
        word[car - 1] = spot - disp[car]
    return tuple(word)


def pf_to_forest_knuth(pf: ParkingFunction) -> RootedForest:
    """Forest whose inversion count equals the displacement of ``pf``."""
    dec = segment_decomposition(pf)
    parent = [0] * pf.m
    for root, (word, cars) in enumerate(zip(dec.segments, dec.cars), 1):
        for local, p in _knuth_tree(word).items():
            parent[cars[local - 1] - 1] = cars[p - 1] if p else -root
    return RootedForest(pf.n - pf.m + 1, pf.m, tuple(parent))


def forest_to_pf_knuth(forest: RootedForest) -> ParkingFunction:
    n = forest.m + forest.s - 1
    prefs = [0] * forest.m
    offset = 0
    for root, cars in enumerate(forest.trees(), 1):
        rank = {car: t for t, car in enumerate(cars, 1)}
        local = {}
        for car in cars:
            p = forest.parent[car - 1]
            local[rank[car]] = rank[p] if p > 0 else 0
        for t, value in enumerate(_knuth_word(local), 1):
            prefs[cars[t - 1] - 1] = value + offset
        offset += len(cars) + 1
    return ParkingFunction(forest.m, n, tuple(prefs))


def forest_count(m: int, s: int) -> int:
    return 1 if m == 0 else s * (m + s) ** (m - 1)


def enumerate_forests(m: int, s: int, cap: int | None = None) -> Iterator[RootedForest]:
    """Every forest of F(m + s, s) once, by backtracking over predecessor maps."""
    if m < 0 or s < 1:
        raise InputError(f"need m >= 0 and s >= 1, got m={m}, s={s}")
    cap = resolve_cap(cap)
    total = forest_count(m, s)
    if total > cap:
        raise ResourceLimit("enumerate_forests", total, cap)
    choices = [-i for i in range(1, s + 1)] + list(range(1, m + 1))
    parent = [0] * m

    def closes_cycle(v, p):
        while p > 0:
            if p == v:
                return True
            p = parent[p - 1]
        return False

    def rec(v):
        if v > m:
            yield RootedForest(s, m, tuple(parent))
            return
        for p in choices:
            if p == v or closes_cycle(v, p):
                continue
            parent[v - 1] = p
            yield from rec(v + 1)
        parent[v - 1] = 0

    yield from rec(1)


def tutte_monomial(pf: ParkingFunction) -> tuple[int, int]:
    """Exponents (x, y) of the Tutte monomial attached to ``pf``."""
    return critical_lr_maxima(pf), displacement(pf)
