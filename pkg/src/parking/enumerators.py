"""Counting formulas, enumerator polynomials and the brute-force oracles behind them.

Everything here is exact: integers, ``fractions.Fraction`` and the
polynomial types from :mod:`parking.polys`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, factorial, prod
from typing import Iterator, Sequence

from .config import resolve_cap
from .errors import InputError, ResourceLimit
from .forests import enumerate_forests, inversions
from .pfcore import (
    ParkingFunction,
    critical_lr_maxima,
    displacement,
    is_parking_function,
    lucky_count,
)
from .polys import BivariatePolynomial, UnivariatePolynomial, exact_power


def _check_mn(m, n):
    if m < 0 or n < 0 or m > n:
        raise InputError(f"need 0 <= m <= n, got m={m}, n={n}")


def count_pf(m: int, n: int) -> int:
    _check_mn(m, n)
    if m == 0:
        return 1
    return (n - m + 1) * (n + 1) ** (m - 1)


def count_pf_recursive(m: int, n: int) -> int:
    """Sum over the largest feasible first preference k of the shuffle counts."""
    _check_mn(m, n)
    if m == 0:
        return 1
    return sum(
        k * comb(m - 1, n - k) * count_pf(m - n + k - 1, k - 1) * count_pf(n - k, n - k)
        for k in range(n - m + 1, n + 1)
    )


def enumerate_pf(m: int, n: int, cap: int | None = None) -> Iterator[ParkingFunction]:
    """Every element of PF(m, n) once, in lexicographic order of preferences."""
    _check_mn(m, n)
    cap = resolve_cap(cap)
    if (n + 1) ** m > cap:
        raise ResourceLimit("enumerate_pf", (n + 1) ** m, cap)
    for prefs in product(range(1, n + 1), repeat=m):
        if is_parking_function(prefs, m, n):
            yield ParkingFunction(m, n, prefs)


def multinomial(total: int, parts: Sequence[int]) -> int:
    if sum(parts) != total or any(p < 0 for p in parts):
        raise InputError(f"parts {parts} do not sum to {total}")
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def count_pf_first(m: int, n: int, j: int) -> int:
    """Number of pi in PF(m, n) with pi_1 = j."""
    _check_mn(m, n)
    if not 1 <= j <= n:
        raise InputError(f"first preference {j} outside [1, {n}]")
    if m == 0:
        raise InputError("no first coordinate when m = 0")
    total = (n - m + 1) * sum(
        comb(m - 1, s) * exact_power(n - s, m - s - 2) * exact_power(s + 1, s - 1)
        for s in range(min(n - j, m - 1) + 1)
    )
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral count {total} for m={m}, n={n}, j={j}")
    return int(total)


def _check_holes(m, n, holes):
    if len(holes) != n - m:
        raise InputError(f"expected {n - m} holes, got {len(holes)}")
    if any(not 1 <= k <= n for k in holes) or any(a >= b for a, b in zip(holes, holes[1:])):
        raise InputError(f"holes {tuple(holes)} must be strictly increasing within [1, {n}]")


def count_pf_with_holes(m: int, n: int, holes: Sequence[int]) -> int:
    _check_mn(m, n)
    holes = tuple(holes)
    _check_holes(m, n, holes)
    ks = (0,) + holes + (n + 1,)
    gaps = [b - a for a, b in zip(ks, ks[1:])]
    weight = prod(exact_power(g, g - 2) for g in gaps)
    total = weight * multinomial(m, [g - 1 for g in gaps])
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral count {total}")
    return int(total)


def hole_patterns(m: int, n: int) -> Iterator[tuple[int, ...]]:
    _check_mn(m, n)
    return combinations(range(1, n + 1), n - m)


@lru_cache(maxsize=None)
def disp_enumerator_shuffle(m: int, s: int) -> UnivariatePolynomial:
    """The first-car shuffle recurrence taken literally, D_{0,s} = 1.

    Matches the displacement enumerator for s = 1 and for m <= 2 only; with
    several free spots the first car's extra cost depends on how the smaller
    cars split into runs.  Kept for comparison.
    """
    if m < 0 or s < 1:
        raise InputError(f"need m >= 0 and s >= 1, got m={m}, s={s}")
    if m == 0:
        return UnivariatePolynomial([1])
    total = UnivariatePolynomial()
    for i in range(m):
        first = UnivariatePolynomial([s] + [1] * i)
        total = total + comb(m - 1, i) * first * disp_enumerator_shuffle(i, s) * disp_enumerator_shuffle(m - 1 - i, 1)
    return total


@lru_cache(maxsize=None)
def disp_enumerator(m: int, s: int) -> UnivariatePolynomial:
    """D_{m,s}(y), the displacement enumerator of PF(m, m + s - 1).

    Classical case (s = 1) by the first-car shuffle recurrence.  For s > 1
    the first segment (cars preferring spots before the first hole) is split
    off: D_{m,s} = sum_i C(m, i) D_{i,1} D_{m-i,s-1}.
    """
    if m < 0 or s < 1:
        raise InputError(f"need m >= 0 and s >= 1, got m={m}, s={s}")
    if s == 1:
        return disp_enumerator_shuffle(m, 1)
    total = UnivariatePolynomial()
    for i in range(m + 1):
        total = total + comb(m, i) * disp_enumerator(i, 1) * disp_enumerator(m - i, s - 1)
    return total


def disp_enumerator_brute(m: int, s: int, cap: int | None = None) -> UnivariatePolynomial:
    return UnivariatePolynomial.from_exponents(
        displacement(pf) for pf in enumerate_pf(m, m + s - 1, cap)
    )


def inv_enumerator(m: int, s: int, cap: int | None = None) -> UnivariatePolynomial:
    return UnivariatePolynomial.from_exponents(
        inversions(f) for f in enumerate_forests(m, s, cap)
    )


# Tutte polynomial of K_{n+1} by deletion-contraction

_X = BivariatePolynomial({(1, 0): 1})


def _complete_graph(v):
    return tuple((a, b, 1) for a in range(v) for b in range(a + 1, v))


def _canonical(v, edges):
    best = None
    for perm in permutations(range(v)):
        key = tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b]), k) for a, b, k in edges))
        if best is None or key < best:
            best = key
    return best


def _is_bridge(v, edges, a, b):
    adj = {u: set() for u in range(v)}
    for u, w, _ in edges:
        if (u, w) != (a, b):
            adj[u].add(w)
            adj[w].add(u)
    seen, stack = {a}, [a]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return b not in seen


def _contract(v, edges, a, b):
    """Merge b into a; edges a-b disappear (the caller accounts for them as loops)."""

    def relabel(u):
        u = a if u == b else u
        return u - (u > b)

    merged = {}
    for u, w, k in edges:
        if {u, w} == {a, b}:
            continue
        u, w = sorted((relabel(u), relabel(w)))
        merged[(u, w)] = merged.get((u, w), 0) + k
    return v - 1, tuple((u, w, k) for (u, w), k in sorted(merged.items()))


def _tutte(v, edges, memo):
    if not edges:
        return BivariatePolynomial.one()
    key = None
    if memo is not None:
        key = (v, _canonical(v, edges))
        if key in memo:
            return memo[key]
    a, b, k = edges[0]
    contracted = _tutte(*_contract(v, edges, a, b), memo)
    if k == 1 and _is_bridge(v, edges, a, b):
        result = _X * contracted
    else:
        rest = tuple(e for e in edges[1:]) if k == 1 else ((a, b, k - 1),) + edges[1:]
        result = _tutte(v, rest, memo) + contracted.shift(dy=k - 1)
    if memo is not None:
        memo[key] = result
    return result


@lru_cache(maxsize=None)
def tutte_complete(n: int, cap: int = 7) -> BivariatePolynomial:
    """T_{K_{n+1}}(x, y), memoised on graph isomorphism class."""
    if n < 0:
        raise InputError("n must be non-negative")
    if n + 1 > cap:
        raise ResourceLimit("tutte_complete vertices", n + 1, cap)
    return _tutte(n + 1, _complete_graph(n + 1), {})


def tutte_complete_plain(n: int, cap: int = 5) -> BivariatePolynomial:
    """Same polynomial without memoisation, for cross-checking."""
    if n + 1 > cap:
        raise ResourceLimit("tutte_complete_plain vertices", n + 1, cap)
    return _tutte(n + 1, _complete_graph(n + 1), None)


def tutte_from_pf(n: int, cap: int | None = None) -> BivariatePolynomial:
    return BivariatePolynomial.from_monomials(
        (critical_lr_maxima(pf), displacement(pf)) for pf in enumerate_pf(n, n, cap)
    )


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def forest_tutte_identity(m: int, s: int, cap: int | None = None):
    """Both sides of the forest identity: multinomial sum of Tutte products, and the pf sum."""
    if m < 0 or s < 1:
        raise InputError(f"need m >= 0 and s >= 1, got m={m}, s={s}")
    left = BivariatePolynomial()
    for parts in compositions(m, s):
        term = BivariatePolynomial.one()
        for x in parts:
            term = term * tutte_complete(x)
        left = left + term * multinomial(m, parts)
    right = BivariatePolynomial.from_monomials(
        (critical_lr_maxima(pf), displacement(pf)) for pf in enumerate_pf(m, m + s - 1, cap)
    )
    return left, right


def graph_count_components(m: int, s: int, k: int, cap: int | None = None) -> int:
    """Graphs on m + s labelled vertices with m + k edges, s components, one root each.

    Roots are vertices 0 .. s-1.  Brute force over edge subsets.
    """
    if m < 0 or s < 1 or k < 0:
        raise InputError(f"need m >= 0, s >= 1, k >= 0, got {m}, {s}, {k}")
    cap = resolve_cap(cap)
    v = m + s
    all_edges = list(combinations(range(v), 2))
    size = comb(len(all_edges), m + k)
    if size > cap:
        raise ResourceLimit("graph_count_components", size, cap)
    count = 0
    for chosen in combinations(all_edges, m + k):
        parent = list(range(v))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for a, b in chosen:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        comps = {find(u) for u in range(v)}
        if len(comps) == s and len({find(r) for r in range(s)}) == s:
            count += 1
    return count


def disp_binomial_sum(m: int, s: int, k: int, cap: int | None = None) -> int:
    return sum(comb(displacement(pf), k) for pf in enumerate_pf(m, m + s - 1, cap))


def abel_A(n: int, x, y, p: int, q: int) -> Fraction:
    """Sum over s of C(n, s) (x + s)^(s + p) (y + n - s)^(n - s + q), exactly."""
    if n < 0:
        raise InputError("n must be non-negative")
    x, y = Fraction(x), Fraction(y)
    return sum(
        (comb(n, s) * exact_power(x + s, s + p) * exact_power(y + n - s, n - s + q) for s in range(n + 1)),
        Fraction(0),
    )


def lucky_gf(m: int, n: int) -> UnivariatePolynomial:
    """Generating polynomial of the lucky-car count over PF(m, n)."""
    _check_mn(m, n)
    if m == 0:
        return UnivariatePolynomial([1])
    out = UnivariatePolynomial([0, n - m + 1])
    for i in range(1, m):
        out = out * UnivariatePolynomial([i, n - i + 1])
    return out


def lucky_gf_brute(m: int, n: int, cap: int | None = None) -> UnivariatePolynomial:
    return UnivariatePolynomial.from_exponents(lucky_count(pf) for pf in enumerate_pf(m, n, cap))


def abel_identities(n: int, x, y, p: int, q: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Both sides of the Abel-sum identities at one argument tuple.

    The special cases are evaluated at their own (p, q); ``p`` and ``q``
    feed only the symmetry and the two recurrences.
    """
    if n < 1:
        raise InputError("need n >= 1 for the recurrences")
    x, y = Fraction(x), Fraction(y)
    t = x + y + n
    out = {
        "symmetry": (abel_A(n, x, y, p, q), abel_A(n, y, x, q, p)),
        "recurrence": (abel_A(n, x, y, p, q),
                       abel_A(n - 1, x, y + 1, p, q + 1) + abel_A(n - 1, x + 1, y, p + 1, q)),
        "expansion": (abel_A(n, x, y, p, q),
                      sum((comb(n, s) * factorial(s) * (x + s) * abel_A(n - s, x + s, y, p - 1, q)
                           for s in range(n + 1)), Fraction(0))),
        "case(-1,-1)": (abel_A(n, x, y, -1, -1), (1 / x + 1 / y) * exact_power(t, n - 1)),
        "case(-1,0)": (abel_A(n, x, y, -1, 0), exact_power(t, n) / x),
        "case(-1,1)": (abel_A(n, x, y, -1, 1),
                       sum((comb(n, s) * exact_power(t, s) * (y + n - s) * factorial(n - s)
                            for s in range(n + 1)), Fraction(0)) / x),
    }
    return out
