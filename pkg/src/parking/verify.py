"""Named verification suites.  Each yields one :class:`Assertion` per identity checked."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator

from . import enumerators as en
from . import laws
from .forests import (
    BfsVersion, RootedForest, enumerate_forests, forest_to_pf, forest_to_pf_knuth, inversions,
    pf_to_forest, pf_to_forest_knuth, tutte_monomial,
)
from .pfcore import (
    ParkingFunction, critical_lr_maxima, critical_lr_maxima_untranslated, displacement, lucky_count,
    specification, unattempted_spots,
)
from .rng import RandomSource


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""
    counterexample: str | None = None

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "counterexample": self.counterexample}


@dataclass
class SuiteOptions:
    max_size: int = 6
    n: int = 4
    seed: int = 0
    tuples: int = 200
    trials: int = 100_000
    cap: int | None = None


WORKED_PF = ParkingFunction(9, 12, (6, 1, 4, 1, 8, 3, 6, 11, 8))
WORKED_FOREST = "4 9 : 1->4 2->01 3->04 4->01 5->3 6->03 7->4 8->5 9->3"
WORKED_PF_TREE_BY_TREE = ParkingFunction(9, 12, (3, 1, 9, 1, 10, 7, 3, 11, 10))
WORKED_KNUTH_FOREST = "4 9 : 1->2 2->01 3->8 4->7 5->3 6->03 7->2 8->04 9->5"


def _eq(name, left, right, witness=None) -> Assertion:
    ok = left == right
    return Assertion(name, ok, "" if ok else f"{left} != {right}", None if ok else witness)


def _pf_sizes(max_size):
    """(m, n) with n = m + s - 1, s >= 1 and m + s <= max_size."""
    for total in range(1, max_size + 1):
        for s in range(1, total + 1):
            yield total - s, total - 1


def suite_counting(o: SuiteOptions) -> Iterator[Assertion]:
    for n in range(o.max_size + 1):
        for m in range(n + 1):
            a = en.count_pf(m, n)
            b = sum(1 for _ in en.enumerate_pf(m, n, o.cap))
            c = en.count_pf_recursive(m, n)
            yield Assertion(f"count({m},{n})", a == b == c, f"{a} {b} {c}")


def suite_bijections(o: SuiteOptions) -> Iterator[Assertion]:
    yield _eq("bfs1 worked example", pf_to_forest(WORKED_PF).to_text(), WORKED_FOREST)
    yield _eq("bfs2 worked example", forest_to_pf(RootedForest.parse(WORKED_FOREST), BfsVersion.TREE_BY_TREE),
              WORKED_PF_TREE_BY_TREE)
    yield _eq("specification", specification(WORKED_PF), (2, 0, 1, 1, 0, 2, 0, 2, 0, 0, 1, 0))
    yield _eq("holes", unattempted_spots(WORKED_PF), (5, 10, 12))
    yield _eq("tutte monomial", tutte_monomial(WORKED_PF_TREE_BY_TREE), (2, 4))
    knuth = pf_to_forest_knuth(WORKED_PF_TREE_BY_TREE)
    yield _eq("knuth worked example", knuth.to_text(), WORKED_KNUTH_FOREST)
    yield _eq("knuth inversions", inversions(knuth), 4)
    maps = [
        ("bfs1", lambda p: pf_to_forest(p, BfsVersion.LEVEL_ORDER), lambda f: forest_to_pf(f, BfsVersion.LEVEL_ORDER)),
        ("bfs2", lambda p: pf_to_forest(p, BfsVersion.TREE_BY_TREE), lambda f: forest_to_pf(f, BfsVersion.TREE_BY_TREE)),
        ("knuth", pf_to_forest_knuth, forest_to_pf_knuth),
    ]
    for m, n in _pf_sizes(o.max_size):
        s = n - m + 1
        for name, fwd, back in maps:
            bad = next((p for p in en.enumerate_pf(m, n, o.cap) if back(fwd(p)) != p), None)
            yield Assertion(f"{name} pf roundtrip ({m},{n})", bad is None, counterexample=bad and bad.to_text())
            bad = next((f for f in enumerate_forests(m, s, o.cap) if fwd(back(f)) != f), None)
            yield Assertion(f"{name} forest roundtrip ({m},{s})", bad is None, counterexample=bad and bad.to_text())


def suite_disp_inv(o: SuiteOptions) -> Iterator[Assertion]:
    for m, n in _pf_sizes(o.max_size):
        s = n - m + 1
        d = en.disp_enumerator_brute(m, s, o.cap)
        yield _eq(f"D=I ({m},{s})", d, en.inv_enumerator(m, s, o.cap))
        yield _eq(f"D recurrence ({m},{s})", d, en.disp_enumerator(m, s))
        bad = next((p for p in en.enumerate_pf(m, n, o.cap) if inversions(pf_to_forest_knuth(p)) != displacement(p)), None)
        yield Assertion(f"inv(knuth)=disp ({m},{n})", bad is None, counterexample=bad and bad.to_text())


def suite_forest_tutte(o: SuiteOptions) -> Iterator[Assertion]:
    for m, n in _pf_sizes(o.max_size):
        left, right = en.forest_tutte_identity(m, n - m + 1, o.cap)
        yield _eq(f"forest tutte ({m},{n - m + 1})", left, right)
        bad = next((p for p in en.enumerate_pf(m, n, o.cap)
                    if critical_lr_maxima(p) != critical_lr_maxima_untranslated(p)), None)
        yield Assertion(f"cm views agree ({m},{n})", bad is None, counterexample=bad and bad.to_text())


def suite_tutte(o: SuiteOptions) -> Iterator[Assertion]:
    for k in range(o.n + 1):
        yield _eq(f"tutte K{k + 1}", en.tutte_from_pf(k, o.cap), en.tutte_complete(k))
        yield _eq(f"tutte K{k + 1} at (1,1)", en.tutte_complete(k)(1, 1), (k + 1) ** (k - 1) if k else 1)


def suite_graphs(o: SuiteOptions) -> Iterator[Assertion]:
    for m, n in _pf_sizes(min(o.max_size, 5)):
        s = n - m + 1
        top = max(displacement(p) for p in en.enumerate_pf(m, n))
        for k in range(top + 1):
            yield _eq(f"graphs ({m},{s},{k})", en.graph_count_components(m, s, k, o.cap),
                      en.disp_binomial_sum(m, s, k, o.cap))


def random_rational(rng: RandomSource) -> Fraction:
    return Fraction(rng.below(40) + 1, rng.below(9) + 1)


def suite_abel(o: SuiteOptions) -> Iterator[Assertion]:
    rng = RandomSource(o.seed)
    for t in range(o.tuples):
        n = rng.below(o.n) + 1
        x, y = random_rational(rng), random_rational(rng)
        p, q = rng.below(5) - 2, rng.below(5) - 2
        for name, (lhs, rhs) in en.abel_identities(n, x, y, p, q).items():
            yield _eq(f"abel {name} #{t}", lhs, rhs, f"n={n} x={x} y={y} p={p} q={q}")


def suite_coordinate(o: SuiteOptions) -> Iterator[Assertion]:
    for n in range(1, min(o.max_size, 5) + 1):
        for m in range(1, n + 1):
            pfs = list(en.enumerate_pf(m, n))
            brute = tuple(Fraction(sum(p.prefs[0] == j for p in pfs), len(pfs)) for j in range(1, n + 1))
            yield _eq(f"pmf ({m},{n})", laws.pmf_first_coordinate(m, n), brute)
    for n in range(1, 101):
        for m in range(1, n + 1):
            pmf = laws.pmf_first_coordinate(m, n)
            ok = all(pmf[j] == laws.plateau_value(m, n) for j in range(n - m + 1))
            ok = ok and pmf[-1] == laws.right_end_value(m, n) and sum(pmf) == 1
            if not ok:
                yield Assertion(f"plateau/right end ({m},{n})", False, counterexample=f"{m} {n}")
                return
    yield Assertion("plateau/right end, n <= 100", True)


def suite_moments(o: SuiteOptions) -> Iterator[Assertion]:
    for n in range(0, min(o.max_size, 5) + 1):
        for m in range(0, n + 1):
            pfs = list(en.enumerate_pf(m, n))
            d = [displacement(p) for p in pfs]
            got = laws.disp_moments_exact(m, n)
            yield _eq(f"disp moments ({m},{n})", (got.mean, got.second_moment),
                      (Fraction(sum(d), len(d)), Fraction(sum(v * v for v in d), len(d))))
            if m:
                rhs = Fraction(n * (n + 1), 2) - m * laws.moment_first(m, n, 1) - Fraction((n + 1) * (n - m), 2)
                yield _eq(f"E(disp) symmetry ({m},{n})", got.mean, rhs)


def suite_holes(o: SuiteOptions) -> Iterator[Assertion]:
    for n in range(1, min(o.max_size, 5) + 1):
        for m in range(0, n):
            pfs = list(en.enumerate_pf(m, n))
            avg = tuple(Fraction(sum(unattempted_spots(p)[i] for p in pfs), len(pfs)) for i in range(n - m))
            yield _eq(f"E(holes) ({m},{n})", laws.expected_holes(m, n), avg)


def suite_lucky(o: SuiteOptions) -> Iterator[Assertion]:
    for n in range(0, min(o.max_size, 5) + 1):
        for m in range(0, n + 1):
            gf = en.lucky_gf(m, n)
            yield _eq(f"lucky gf ({m},{n})", gf, en.lucky_gf_brute(m, n))
            if m:
                pfs = list(en.enumerate_pf(m, n))
                yield _eq(f"lucky mean ({m},{n})", laws.lucky_mean(m, n),
                          Fraction(sum(lucky_count(p) for p in pfs), len(pfs)))


def suite_ensembles(o: SuiteOptions) -> Iterator[Assertion]:
    from .randomized import ensemble_pattern_dist
    for n in range(1, min(o.max_size, 4) + 1):
        for m in range(1, n + 1):
            a, b = ensemble_pattern_dist(m, n, o.cap)
            yield _eq(f"patterns ({m},{n})", a, b)


def suite_shuffle(o: SuiteOptions) -> Iterator[Assertion]:
    from .randomized import (
        disp_from_coordinates, max_first_preference, max_first_preference_brute, shuffle_coordinates,
    )
    for n in range(1, min(o.max_size, 5) + 1):
        for m in range(1, n + 1):
            bad = next((r for r in product(range(1, n + 1), repeat=m - 1)
                        if max_first_preference(r, n) != max_first_preference_brute(r, n)), None)
            yield Assertion(f"max first ({m},{n})", bad is None, counterexample=bad and f"{n} : {bad}")
            bad = next((p for p in en.enumerate_pf(m, n)
                        if disp_from_coordinates(shuffle_coordinates(p)) != displacement(p)), None)
            yield Assertion(f"shuffle disp ({m},{n})", bad is None, counterexample=bad and bad.to_text())


def suite_sampler(o: SuiteOptions) -> Iterator[Assertion]:
    from .randomized import uniformity_check
    for worker, (m, n) in enumerate([(2, 2), (3, 5), (2, 4)]):
        r = uniformity_check(m, n, o.trials, RandomSource(o.seed, worker))
        yield Assertion(f"chi2 ({m},{n})", bool(r.passed), f"p={r.statistics.get('pValue')}")


SUITES: dict[str, Callable[[SuiteOptions], Iterator[Assertion]]] = {
    "counting": suite_counting,
    "bijections": suite_bijections,
    "disp-inv": suite_disp_inv,
    "forest-tutte": suite_forest_tutte,
    "tutte": suite_tutte,
    "graphs": suite_graphs,
    "abel": suite_abel,
    "coordinate": suite_coordinate,
    "moments": suite_moments,
    "holes": suite_holes,
    "lucky": suite_lucky,
    "ensembles": suite_ensembles,
    "shuffle": suite_shuffle,
    "sampler": suite_sampler,
}


def run_suite(name: str, options: SuiteOptions, stop_at_first: bool = True) -> list[Assertion]:
    out = []
    for a in SUITES[name](options):
        out.append(a)
        if stop_at_first and not a.passed:
            break
    return out
