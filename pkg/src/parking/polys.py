"""Small exact polynomial types with unbounded integer coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class UnivariatePolynomial:
    """Coefficients ``coeffs[i]`` of y**i, trailing zeros trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def monomial(cls, degree, coeff=1):
        return cls([0] * degree + [coeff])

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]):
        counts = {}
        for e in exponents:
            counts[e] = counts.get(e, 0) + 1
        top = max(counts, default=-1)
        return cls(counts.get(i, 0) for i in range(top + 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = UnivariatePolynomial([other])
        return isinstance(other, UnivariatePolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = UnivariatePolynomial([other])
        size = max(len(self.coeffs), len(other.coeffs))
        return UnivariatePolynomial(self[i] + other[i] for i in range(size))

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return UnivariatePolynomial(c * other for c in self.coeffs)
        out = [0] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __call__(self, y):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def derivative(self):
        return UnivariatePolynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def __repr__(self):
        return f"UnivariatePolynomial({list(self.coeffs)!r})"

    def __str__(self):
        terms = [_term(c, "", 0, "y", i) for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"

    def to_terms(self):
        return [{"ydeg": i, "coeff": str(c)} for i, c in enumerate(self.coeffs) if c]


class BivariatePolynomial:
    """Sparse map (x-degree, y-degree) -> nonzero integer coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def from_monomials(cls, pairs: Iterable[tuple[int, int]]):
        terms = {}
        for key in pairs:
            terms[key] = terms.get(key, 0) + 1
        return cls(terms)

    def __eq__(self, other):
        return isinstance(other, BivariatePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BivariatePolynomial(out)

    def __mul__(self, other):
        if isinstance(other, int):
            return BivariatePolynomial({k: v * other for k, v in self.terms.items()})
        out = {}
        for (a, b), u in self.terms.items():
            for (c, d), v in other.terms.items():
                key = (a + c, b + d)
                out[key] = out.get(key, 0) + u * v
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def shift(self, dx=0, dy=0):
        return BivariatePolynomial({(a + dx, b + dy): v for (a, b), v in self.terms.items()})

    def __call__(self, x, y):
        return sum(v * x**a * y**b for (a, b), v in self.terms.items())

    def at_x(self, x) -> UnivariatePolynomial:
        coeffs = {}
        for (a, b), v in self.terms.items():
            coeffs[b] = coeffs.get(b, 0) + v * x**a
        top = max(coeffs, default=-1)
        return UnivariatePolynomial(coeffs.get(i, 0) for i in range(top + 1))

    def __repr__(self):
        return f"BivariatePolynomial({dict(sorted(self.terms.items()))!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (-(k[0] + k[1]), -k[0]))
        return " + ".join(_term(self.terms[k], "x", k[0], "y", k[1]) for k in keys)

    def to_terms(self):
        return [
            {"xdeg": a, "ydeg": b, "coeff": str(v)} for (a, b), v in sorted(self.terms.items())
        ]


def _power(var, e):
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


def _term(c, xv, xe, yv, ye):
    mono = _power(xv, xe) + _power(yv, ye) if xv else _power(yv, ye)
    if not mono:
        return str(c)
    if c == 1:
        return mono
    return f"{c}{mono}"


def exact_power(base: Fraction | int, exponent: int) -> Fraction:
    from .errors import DomainError

    base = Fraction(base)
    if exponent < 0 and base == 0:
        raise DomainError(f"0 raised to {exponent}")
    return base**exponent
