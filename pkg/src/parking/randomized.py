"""Shuffle decomposition, Monte Carlo checks and their reports.

Exact laws live in :mod:`parking.laws` and the sampler in
:mod:`parking.sampling`; both are re-exported here.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np
from scipy import stats

from . import __version__
from .config import resolve_cap
from .enumerators import count_pf, enumerate_pf
from .errors import InputError, NoFeasibleFirst, ResourceLimit
from .laws import (  # noqa: F401  (re-exported)
    BoundaryLaws, DispMoments, borel_pmf, borel_tail, boundary_laws, cov_first_two_asymptotic,
    disp_moments_asymptotic, disp_moments_exact, expected_holes, lucky_mean, lucky_variance,
    moment_first, moment_first_asymptotic, pmf_first_coordinate, poisson_pmf, q_function,
    var_first_asymptotic,
)
from .pfcore import ParkingFunction, displacement, is_parking_function, segment_decomposition
from .rng import RandomSource
from .sampling import (  # noqa: F401
    displacements, linear_holes, lucky_counts, repeats, sample_pf, sample_pf_batch, sample_pf_stream,
)

SIGNIFICANCE = 1e-3
SE_BAND = 3.0
KS_THRESHOLD = 0.02


# -- shuffle decomposition --------------------------------------------------

def max_first_preference(rest: Sequence[int], n: int) -> int | None:
    """Largest k with (k, *rest) in PF(len(rest) + 1, n), or None.

    The feasible first preferences always form a prefix [k].
    """
    m = len(rest) + 1
    if m > n:
        return None
    if any(not 1 <= v <= n for v in rest):
        raise InputError(f"preferences must lie in [1, {n}]")
    counts = [0] * (n + 1)
    for v in rest:
        counts[v] += 1
    k, below = None, 0
    for i in range(1, n + 1):
        below += counts[i]
        if i < n - m + 1:
            continue
        slack = below - (m - n + i)
        if slack < -1:
            return None
        if slack == -1 and k is None:
            k = i
    return n if k is None else k


def max_first_preference_brute(rest: Sequence[int], n: int) -> int | None:
    ok = [j for j in range(1, n + 1) if is_parking_function((j, *rest), len(rest) + 1, n)]
    return max(ok) if ok else None


@dataclass(frozen=True)
class ShuffleWitness:
    k: int
    alpha: ParkingFunction
    beta: ParkingFunction
    interleaving: tuple[bool, ...]  # True where rest[t] came from alpha

    def recompose(self) -> tuple[int, ...]:
        a, b = iter(self.alpha.prefs), iter(self.beta.prefs)
        return tuple(next(a) if from_alpha else next(b) + self.k for from_alpha in self.interleaving)


def shuffle_decompose(rest: Sequence[int], n: int) -> ShuffleWitness:
    rest = tuple(rest)
    k = max_first_preference(rest, n)
    if k is None:
        raise NoFeasibleFirst(f"no first preference completes {rest} to a parking function on {n} spots")
    if k in rest:
        raise AssertionError("a later car prefers k")
    mask = tuple(v < k for v in rest)
    alpha = ParkingFunction(len(rest) + 1 - n + k - 1, k - 1, tuple(v for v in rest if v < k))
    beta_prefs = tuple(v - k for v in rest if v > k)
    beta = ParkingFunction(len(beta_prefs), n - k, beta_prefs)
    return ShuffleWitness(k, alpha, beta, mask)


@dataclass(frozen=True)
class ShuffleCoordinates:
    i: int
    subset: tuple[int, ...]  # positions (1-based, within pi_2..pi_m) of the alpha part
    alpha: ParkingFunction
    beta: ParkingFunction
    j: int


def shuffle_coordinates(pf: ParkingFunction) -> ShuffleCoordinates:
    if pf.m == 0:
        raise InputError("need at least one car")
    w = shuffle_decompose(pf.prefs[1:], pf.n)
    subset = tuple(t + 1 for t, a in enumerate(w.interleaving) if a)
    return ShuffleCoordinates(len(subset), subset, w.alpha, w.beta, pf.prefs[0])


def first_car_extra(c: ShuffleCoordinates) -> int:
    """Extra displacement the alpha cars pick up from the first car.

    It is the distance from j to the first spot of [1, k] that alpha leaves
    free.  Over all (alpha, j) its weight y^extra sums to
    (s + y + ... + y^i) D_{i,s}(y), though not term by term as max(i + 1 - j, 0).
    """
    k = c.alpha.n + 1
    taken = set(c.alpha.outcome().slots)
    spot = c.j
    while spot < k and spot in taken:
        spot += 1
    return spot - c.j


def disp_from_coordinates(c: ShuffleCoordinates) -> int:
    return displacement(c.alpha) + displacement(c.beta) + first_car_extra(c)


# -- reports ----------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v) if abs(v) >= 2**53 else v
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return str(v)


@dataclass
class Check:
    """One verdict: ``statistic`` compared with ``threshold`` by ``rule``.

    Rules: ``"lt"`` (statistic < threshold), ``"ge"`` (statistic >= threshold),
    ``"abs_le"`` (|statistic| <= threshold).
    """

    name: str
    statistic: float
    threshold: float
    rule: str

    @property
    def passed(self) -> bool:
        s, t = self.statistic, self.threshold
        if self.rule == "lt":
            return bool(s < t)
        if self.rule == "ge":
            return bool(s >= t)
        if self.rule == "abs_le":
            return bool(abs(s) <= t)
        raise ValueError(self.rule)

    def to_dict(self):
        return {"name": self.name, "statistic": float(self.statistic), "threshold": self.threshold,
                "rule": self.rule, "passed": self.passed}


@dataclass
class SampleReport:
    config: dict
    seed: dict | None
    sample_count: int
    counts: dict = field(default_factory=dict)
    statistics: dict = field(default_factory=dict)
    references: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    @property
    def verdicts(self) -> dict[str, bool]:
        return {c.name: c.passed for c in self.checks}

    @property
    def passed(self) -> bool | None:
        """None when there is nothing to judge."""
        return all(c.passed for c in self.checks) if self.checks else None

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "tool": {"name": "parking", "version": __version__},
            "config": _jsonable(self.config),
            "seed": _jsonable(self.seed),
            "sampleCount": self.sample_count,
            "counts": _jsonable(self.counts),
            "statistics": _jsonable(self.statistics),
            "references": _jsonable(self.references),
            "checks": [c.to_dict() for c in self.checks],
            "verdicts": self.verdicts,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def counts_csv(self) -> str:
        """Empirical pmf as CSV: value,count,frequency,reference."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "count", "frequency", "reference"])
        ref = self.references.get("pmf", {})
        for key in sorted(self.counts, key=_sort_key):
            cnt = self.counts[key]
            freq = cnt / self.sample_count if self.sample_count else 0.0
            w.writerow([key, cnt, f"{freq:.10g}", _fmt(ref.get(key, ""))])
        return buf.getvalue()


def _sort_key(k):
    try:
        return (0, int(k), "")
    except (TypeError, ValueError):
        return (1, 0, str(k))


def _fmt(x):
    return f"{float(x):.10g}" if isinstance(x, (float, Fraction)) else x


def _config(kind, **params):
    return {"check": kind, **params}


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")


def _batch_se(values: np.ndarray) -> float:
    return float(values.std(ddof=1) / math.sqrt(values.size))


def _collect(m, n, trials, rng, fn):
    out = [fn(b) for b in sample_pf_stream(m, n, trials, rng)]
    return np.concatenate(out) if out else np.zeros(0)


# -- uniformity -------------------------------------------------------------

def _encode(prefs: np.ndarray, n: int) -> np.ndarray:
    base = np.int64(n + 1)
    code = np.zeros(prefs.shape[0], dtype=np.int64)
    for col in range(prefs.shape[1]):
        code = code * base + prefs[:, col]
    return code


def uniformity_check(m: int, n: int, trials: int, rng: RandomSource, significance=SIGNIFICANCE,
                     cap: int | None = None) -> SampleReport:
    """Chi-square of sampler frequencies against uniformity on PF(m, n)."""
    support = [pf.prefs for pf in enumerate_pf(m, n, cap=resolve_cap(cap))]
    index = {p: t for t, p in enumerate(support)}
    codes = _encode(np.array(support, dtype=np.int64).reshape(len(support), m), n)
    order = np.argsort(codes)
    freq = np.zeros(len(support), dtype=np.int64)
    for b in sample_pf_stream(m, n, trials, rng):
        pos = np.searchsorted(codes[order], _encode(b, n))
        freq += np.bincount(order[pos], minlength=len(support))
    report = SampleReport(_config("chi2", m=m, n=n, trials=trials, significance=significance),
                          rng.describe(), trials)
    report.counts = {" ".join(map(str, p)): int(freq[index[p]]) for p in support}
    report.references = {"pmf": {" ".join(map(str, p)): Fraction(1, len(support)) for p in support}}
    if trials == 0:
        return report
    if len(support) == 1:
        report.statistics = {"chi2": 0.0, "df": 0, "pValue": 1.0}
    else:
        chi2, pvalue = stats.chisquare(freq)
        report.statistics = {"chi2": float(chi2), "df": len(support) - 1, "pValue": float(pvalue)}
    report.checks.append(Check("chi2-uniform", report.statistics["pValue"], significance, "ge"))
    return report


# -- covariance structure ---------------------------------------------------

@dataclass(frozen=True)
class CovarianceRecord:
    n: int
    exact: bool
    var_first: float | Fraction
    cov_first_two: float | Fraction
    var_disp: float | Fraction
    identity_holds: bool
    report: SampleReport | None = None


def covariance_checks(n: int, rng: RandomSource | None = None, trials: int = 100_000,
                      exact_limit: int = 6, cap: int | None = None,
                      exact_reference: bool = True) -> CovarianceRecord:
    """Var(pi_1), Cov(pi_1, pi_2) and Var(disp) for classical parking functions.

    Exact enumeration for n <= ``exact_limit``; Monte Carlo beyond, with
    coordinate-pooled estimators and batch-means standard errors.  The
    pooled estimates are precise enough to resolve the O(1) remainder of the
    two-term asymptotics, so they are judged against exact rational values;
    Var(pi_1)/n^2 against 1/12 uses the single-coordinate estimator.
    """
    if n < 1:
        raise InputError("need n >= 1")
    if n <= exact_limit:
        cap = resolve_cap(cap)
        if count_pf(n, n) > cap:
            raise ResourceLimit("PF(n, n)", count_pf(n, n), cap)
        pfs = list(enumerate_pf(n, n, cap=cap))
        total = len(pfs)
        e1 = Fraction(sum(p.prefs[0] for p in pfs), total)
        v1 = Fraction(sum(p.prefs[0] ** 2 for p in pfs), total) - e1 * e1
        cv = Fraction(0) if n == 1 else Fraction(sum(p.prefs[0] * p.prefs[1] for p in pfs), total) - e1 * e1
        d = [displacement(p) for p in pfs]
        ed = Fraction(sum(d), total)
        vd = Fraction(sum(x * x for x in d), total) - ed * ed
        return CovarianceRecord(n, True, v1, cv, vd, vd == n * v1 + n * (n - 1) * cv)
    if rng is None:
        raise InputError("Monte Carlo path needs a RandomSource")
    batches = 20
    per = max(trials // batches, 2)
    v1s, cvs, vds, singles = [], [], [], []
    for _ in range(batches):
        x = sample_pf_batch(n, n, per, rng).astype(np.float64)
        v1 = float(((x - x.mean()) ** 2).mean())
        # Var(sum) = n Var + n(n-1) Cov, and sum(pi) = C(n+1, 2) - disp
        vsum = float(x.sum(axis=1).var(ddof=1))
        v1s.append(v1)
        cvs.append((vsum - n * v1) / (n * (n - 1)))
        vds.append(vsum)
        singles.append(float(x[:, 0].var(ddof=1)))
    v1s, cvs, vds, singles = map(np.array, (v1s, cvs, vds, singles))
    report = SampleReport(_config("covariance", n=n, trials=per * batches, batches=batches),
                          rng.describe(), per * batches)
    se = {"varFirst": _batch_se(v1s), "covFirstTwo": _batch_se(cvs), "varDisp": _batch_se(vds),
          "varFirstSingle": _batch_se(singles)}
    report.statistics = {
        "varFirst": v1s.mean(), "covFirstTwo": cvs.mean(), "varDisp": vds.mean(),
        "varFirstSingleCoordinate": singles.mean(), "varFirstOverN2": singles.mean() / n**2,
        "standardErrors": se,
    }
    report.references = {
        "varFirstAsymptotic": var_first_asymptotic(n), "covFirstTwoAsymptotic": cov_first_two_asymptotic(n),
        "varDispAsymptotic": disp_moments_asymptotic(n, n)[1], "varFirstOverN2Limit": 1 / 12,
    }
    report.checks.append(Check("var-first-over-n2", (singles.mean() / n**2 - 1 / 12) / (se["varFirstSingle"] / n**2),
                               SE_BAND, "abs_le"))
    if exact_reference:
        e1 = moment_first(n, n, 1)
        v1_exact = moment_first(n, n, 2) - e1 * e1
        vd_exact = disp_moments_exact(n, n).variance
        cv_exact = (vd_exact - n * v1_exact) / (n * (n - 1))
        report.references.update(varFirst=v1_exact, covFirstTwo=cv_exact, varDisp=vd_exact)
        report.checks += [
            Check("var-first", (v1s.mean() - float(v1_exact)) / se["varFirst"], SE_BAND, "abs_le"),
            Check("cov-first-two", (cvs.mean() - float(cv_exact)) / se["covFirstTwo"], SE_BAND, "abs_le"),
            Check("var-disp", (vds.mean() - float(vd_exact)) / se["varDisp"], SE_BAND, "abs_le"),
        ]
    identity = math.isclose(vds.mean(), n * v1s.mean() + n * (n - 1) * cvs.mean(), rel_tol=1e-9)
    return CovarianceRecord(n, False, float(v1s.mean()), float(cvs.mean()), float(vds.mean()), identity, report)


# -- holes ------------------------------------------------------------------

def hole_estimator(m: int, n: int, rng: RandomSource, trials: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample means and standard errors of the ordered hole positions k_1 < ... < k_{n-m}."""
    spots = np.arange(1, n + 1)

    def positions(b):
        h = linear_holes(b, n)
        return np.broadcast_to(spots, h.shape)[h].reshape(b.shape[0], n - m)

    if n == m:
        return np.zeros(0), np.zeros(0)
    k = _collect(m, n, trials, rng, positions)
    return k.mean(axis=0), k.std(axis=0, ddof=1) / math.sqrt(k.shape[0])


def holes_check(m: int, n: int, rng: RandomSource, trials: int, band=SE_BAND) -> SampleReport:
    seed = rng.describe()
    mean, se = hole_estimator(m, n, rng, trials)
    exact = expected_holes(m, n)
    report = SampleReport(_config("holes", m=m, n=n, trials=trials, band=band), seed, trials)
    report.statistics = {"mean": mean, "standardError": se}
    report.references = {"mean": exact}
    for i, (x, s, e) in enumerate(zip(mean, se, exact), start=1):
        report.checks.append(Check(f"hole-{i}", (x - float(e)) / s, band, "abs_le"))
    return report


# -- ensembles and repeats --------------------------------------------------

def _pattern(prefs):
    return tuple(int(a == b) for a, b in zip(prefs, prefs[1:]))


def ensemble_pattern_dist(m: int, n: int, cap: int | None = None) -> tuple[dict, dict]:
    """Law of (Y_1..Y_{m-1}) on uniform PF(m, n) and on uniform [n+1]^m."""
    cap = resolve_cap(cap)
    if (n + 1) ** m > cap:
        raise ResourceLimit("[n+1]^m", (n + 1) ** m, cap)
    pf_side = Counter(_pattern(p.prefs) for p in enumerate_pf(m, n, cap=cap))
    fn_side = Counter(_pattern(p) for p in product(range(1, n + 2), repeat=m))
    tp, tf = sum(pf_side.values()), (n + 1) ** m
    return ({k: Fraction(v, tp) for k, v in pf_side.items()},
            {k: Fraction(v, tf) for k, v in fn_side.items()})


def repeats_checks(m: int, n: int, rng: RandomSource, trials: int, jmax: int = 4,
                   band=SE_BAND) -> SampleReport:
    """Empirical law of the repeat count R against its Poisson(m/n) limit."""
    seed = rng.describe()
    r = _collect(m, n, trials, rng, repeats).astype(np.int64)
    counts = np.bincount(r, minlength=jmax + 1) if r.size else np.zeros(jmax + 1, dtype=np.int64)
    c = m / n
    report = SampleReport(_config("repeats", m=m, n=n, trials=trials, band=band), seed, trials)
    report.counts = {str(j): int(v) for j, v in enumerate(counts)}
    poisson = {str(j): poisson_pmf(c, j) for j in range(jmax + 1)}
    binom = {str(j): float(stats.binom.pmf(j, m - 1, 1 / (n + 1))) for j in range(jmax + 1)}
    report.references = {"pmf": poisson, "exactBinomial": binom}
    if trials == 0:
        return report
    for j in range(jmax + 1):
        p = poisson[str(j)]
        se = math.sqrt(p * (1 - p) / trials)
        report.checks.append(Check(f"repeats-{j}", (counts[j] / trials - p) / se, band, "abs_le"))
    return report


# -- lucky cars -------------------------------------------------------------

def lucky_clt_check(m: int, n: int, rng: RandomSource, trials: int, threshold=KS_THRESHOLD) -> SampleReport:
    """Standardized lucky-car counts against the standard normal.

    L is integer valued with standard deviation of order sqrt(n), so the raw
    sup distance to a continuous law carries a lattice term of about
    pmf_max / 2.  The verdict uses the continuity-corrected distance
    max_l |F(l) - Phi((l + 1/2 - mu) / sigma)| over all lattice points l; the
    raw and decile distances are reported alongside.
    """
    seed = rng.describe()
    mu, var = lucky_mean(m, n), lucky_variance(m, n)
    report = SampleReport(_config("lucky-clt", m=m, n=n, trials=trials, threshold=threshold), seed, trials)
    report.references = {"mean": mu, "variance": var}
    if trials == 0 or var == 0:
        return report
    lucky = _collect(m, n, trials, rng, lambda b: lucky_counts(b, n)).astype(np.int64)
    mu_f, sigma = float(mu), math.sqrt(float(var))
    values = np.arange(0, m + 1)
    ecdf = np.cumsum(np.bincount(lucky, minlength=m + 1)) / trials
    z = (values - mu_f) / sigma
    ks_corrected = float(np.max(np.abs(ecdf - stats.norm.cdf(z + 0.5 / sigma))))
    raw = float(stats.kstest((lucky - mu_f) / sigma, "norm").statistic)
    deciles = stats.norm.ppf(np.arange(1, 10) / 10)
    emp_dec = np.array([(lucky <= mu_f + q * sigma).mean() for q in deciles])
    report.counts = {str(v): int(c) for v, c in enumerate(np.bincount(lucky, minlength=m + 1)) if c}
    report.statistics = {
        "sampleMean": float(lucky.mean()), "sampleVariance": float(lucky.var(ddof=1)),
        "ksContinuityCorrected": ks_corrected, "ksRaw": raw,
        "ksDeciles": float(np.max(np.abs(emp_dec - np.arange(1, 10) / 10))),
    }
    report.checks.append(Check("ks-normal", ks_corrected, threshold, "lt"))
    return report


# -- excursion --------------------------------------------------------------

def excursion_profile(pf: ParkingFunction, segment_index: int, grid_size: int,
                      scale: str = "segment") -> list[float]:
    """sqrt(w) * (F(x) - x) at x = t / grid_size, t = 0..grid_size.

    F(x) is the fraction of the segment's cars whose translated preference is
    at most w x.  With ``scale="segment"`` w is the segment length, so F(1) = 1
    and the profile ends at 0; ``scale="gap"`` uses the distance between the
    bounding holes, k_{i+1} - k_i, which is one more.
    """
    dec = segment_decomposition(pf)
    if not 0 <= segment_index < len(dec.segments):
        raise InputError(f"segment index {segment_index} out of range")
    if grid_size < 1:
        raise InputError("grid_size must be positive")
    seg = dec.segments[segment_index]
    if not seg:
        return [0.0] * (grid_size + 1)
    if scale == "segment":
        w = len(seg)
    elif scale == "gap":
        w = len(seg) + 1
    else:
        raise InputError(f"unknown scale {scale!r}")
    prefs = sorted(seg)
    out = []
    for t in range(grid_size + 1):
        x = Fraction(t, grid_size)
        below = sum(1 for v in prefs if v <= w * x)
        out.append(math.sqrt(w) * float(Fraction(below, w) - x))
    return out


def excursion_csv(pf: ParkingFunction, segment_index: int, grid_size: int, scale="segment") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "profile"])
    for t, v in enumerate(excursion_profile(pf, segment_index, grid_size, scale)):
        w.writerow([f"{t / grid_size:.10g}", f"{v:.10g}"])
    return buf.getvalue()
