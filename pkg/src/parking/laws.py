"""Exact (rational) and asymptotic (float) laws for coordinates, displacement and holes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .enumerators import count_pf, count_pf_first
from .errors import InputError


def _check(m, n):
    if not 0 <= m <= n:
        raise InputError(f"need 0 <= m <= n, got m={m}, n={n}")


# -- first coordinate -------------------------------------------------------

@lru_cache(maxsize=256)
def pmf_first_coordinate(m: int, n: int) -> tuple[Fraction, ...]:
    """P(pi_1 = j) for j = 1..n under the uniform law on PF(m, n)."""
    _check(m, n)
    if n == 0:
        return ()
    if m == 0:
        raise InputError("the first coordinate needs m >= 1")
    total = count_pf(m, n)
    # count with pi_1 = j is (n-m+1) * sum_{s <= min(n-j, m-1)} t_s
    terms = [math.comb(m - 1, s) * Fraction(n - s) ** (m - s - 2) * Fraction(s + 1) ** (s - 1) for s in range(m)]
    prefix, acc = [], Fraction(0)
    for t in terms:
        acc += t
        prefix.append(acc)
    out = []
    for j in range(1, n + 1):
        count = (n - m + 1) * prefix[min(n - j, m - 1)]
        out.append(count / total)
    return tuple(out)


def plateau_value(m: int, n: int) -> Fraction:
    return Fraction(n - m + 2, (n - m + 1) * (n + 1))


def right_end_value(m: int, n: int) -> Fraction:
    return Fraction(n ** (m - 2) if m >= 2 else Fraction(1, n), (n + 1) ** (m - 1))


def tail_class_probability(m: int, n: int, k: int) -> Fraction:
    """P(A_{pi_2..pi_m} = [k] and pi_1 = j) for any fixed j <= k."""
    _check(m, n)
    if not max(1, n - m + 1) <= k <= n:
        return Fraction(0)
    size = math.comb(m - 1, n - k) * (n - m + 1)
    size *= Fraction(k) ** (m - n + k - 2) * Fraction(n - k + 1) ** (n - k - 1)
    return size / count_pf(m, n)


def moment_first(m: int, n: int, l: int) -> Fraction:
    if l < 1:
        raise InputError("moment order must be >= 1")
    pmf = pmf_first_coordinate(m, n)
    return sum((p * j**l for j, p in enumerate(pmf, start=1)), Fraction(0))


def moment_first_asymptotic(m: int, n: int, l: int) -> float:
    if l < 1:
        raise InputError("moment order must be >= 1")
    _check(m, n)
    if m < n:
        c = m / n
        corr = (1 - c + l * (1 - 3 * c)) / (2 * (1 - c))
        return n**l / (l + 1) * (1 + corr / n)
    if l == 1:
        return n / 2 * (1 - math.sqrt(math.pi / (2 * n)) + 10 / (3 * n))
    if l == 2:
        return n**2 / 3 * (1 - 3 * math.sqrt(2 * math.pi) / (4 * math.sqrt(n)) + 11 / (2 * n))
    raise InputError("for m = n only l = 1, 2 have a displayed expansion")


# -- Borel law and boundary approximations ---------------------------------

def borel_pmf(mu: float, j: int) -> float:
    if not 0 <= mu <= 1 or j < 1:
        raise InputError("need 0 <= mu <= 1 and j >= 1")
    if mu == 0:
        return 1.0 if j == 1 else 0.0
    return math.exp(-mu * j + (j - 1) * math.log(mu * j) - math.lgamma(j + 1))


def borel_tail(mu: float, j: int) -> float:
    """Q_mu(j) = P(X >= j).

    For mu < 1 the terms are summed from j until a term drops below 1e-15
    of the accumulated mass with the index past 10 / (1 - mu).  At mu = 1
    the tail decays like j^(-1/2), so the complement of the head is used.
    """
    if not 0 <= mu <= 1 or j < 1:
        raise InputError("need 0 <= mu <= 1 and j >= 1")
    if j == 1:
        return 1.0
    if mu > 1 - 1e-4:
        return max(0.0, 1.0 - math.fsum(borel_pmf(mu, i) for i in range(1, j)))
    horizon = 10 / (1 - mu)
    acc, i = 0.0, j
    while True:
        t = borel_pmf(mu, i)
        acc += t
        if i > horizon and t <= 1e-15 * acc:
            return acc
        i += 1


@dataclass(frozen=True)
class BoundaryLaws:
    m: int
    n: int
    j: int
    right_end: float        # n P(pi_1 = n - j) ~ 1 - Q_{m/n}(j + 2)
    borel_point: float      # n P(A = [n - j]) ~ P_{m/n}(X = j + 1)
    plateau: float          # exact plateau level, for reference
    poisson_ratio: float    # P(A=[n-m+1+j]) / P(A=[n-m+1]) ~ lambda^j / j!


def boundary_laws(m: int, n: int, j: int) -> BoundaryLaws:
    _check(m, n)
    c = m / n
    lam = n * (1 - c) / math.e
    return BoundaryLaws(
        m, n, j,
        right_end=1 - borel_tail(c, j + 2),
        borel_point=borel_pmf(c, j + 1),
        plateau=float(plateau_value(m, n)),
        poisson_ratio=math.exp(j * math.log(lam) - math.lgamma(j + 1)) if lam > 0 else float(j == 0),
    )


# -- displacement -----------------------------------------------------------

def q_function(r: int, m: int, n: int) -> Fraction:
    """Sum over j >= 0 of C(r + j, j) n(n-1)...(n-j+1) / m^j."""
    if m < 1 or n < 0:
        raise InputError("need m >= 1 and n >= 0")
    total, falling = Fraction(0), Fraction(1)
    for j in range(n + 1):
        total += math.comb(r + j, j) * falling
        falling = falling * (n - j) / m
    return total


@dataclass(frozen=True)
class DispMoments:
    mean: Fraction
    second_moment: Fraction

    @property
    def variance(self) -> Fraction:
        return self.second_moment - self.mean**2


def disp_moments_exact(m: int, n: int) -> DispMoments:
    _check(m, n)
    if m == 0:
        return DispMoments(Fraction(0), Fraction(0))
    if m == n:
        q = q_function(0, n + 1, n)
        mean = Fraction(n + 1, 2) * (q - 1) - Fraction(n, 2)
        second = Fraction(n, 12) * (5 * n * n + 13 * n + 4 - (14 * n + 8) * Fraction(n + 1, n) * (q - 1))
        return DispMoments(mean, second)
    q = q_function(0, n + 1, m - 1)
    a = n - m + 1
    mean = Fraction(m, 2) * (q - 1)
    second = Fraction(m, 12) * (
        a**3 + (m + 3) * a**2 + (8 * m + 1) * a + 5 * m * m + 4 * m - 1
        - (a**3 + 4 * a**2 + (6 * m + 3) * a + 8 * m) * q
    )
    return DispMoments(mean, second)


def disp_moments_asymptotic(m: int, n: int) -> tuple[float, float]:
    """Leading terms of (mean, variance) of disp."""
    _check(m, n)
    if m == n:
        r = math.sqrt(2 * math.pi)
        mean = r / 4 * n**1.5 - 7 / 6 * n + 19 * r / 48 * n**0.5
        var = (10 - 3 * math.pi) / 24 * n**3 + (184 - 57 * math.pi) / 144 * n**2
        return mean, var
    c = m / n
    mean = c * c / (2 * (1 - c)) * n + c * (c * c - c - 1) / (2 * (1 - c) ** 3)
    var = c * (6 * c - 6 * c * c + 4 * c**3 - c**4) / (12 * (1 - c) ** 4) * n
    return mean, var


def var_first_asymptotic(n: int) -> float:
    return n * n / 12 + (4 - 3 * math.pi) * n / 24


def cov_first_two_asymptotic(n: int) -> float:
    return (8 - 3 * math.pi) * n / 24 + (208 - 57 * math.pi) / 144


# -- holes and lucky cars ---------------------------------------------------

def expected_holes(m: int, n: int) -> tuple[Fraction, ...]:
    """E(k_i) for the n - m unattempted spots k_1 < ... < k_{n-m}."""
    _check(m, n)
    return tuple(Fraction(i * (n + 1), n - m + 1) for i in range(1, n - m + 1))


def lucky_mean(m: int, n: int) -> Fraction:
    return 1 + sum((1 - Fraction(i, n + 1) for i in range(1, m)), Fraction(0)) if m else Fraction(0)


def lucky_variance(m: int, n: int) -> Fraction:
    return sum((Fraction(i, n + 1) * (1 - Fraction(i, n + 1)) for i in range(1, m)), Fraction(0))


def poisson_pmf(lam: float, j: int) -> float:
    if lam == 0:
        return float(j == 0)
    return math.exp(-lam + j * math.log(lam) - math.lgamma(j + 1))
