"""Exact polynomials and rational functions in a single infinitesimal ``e``.

Coefficients are Python integers, so nothing overflows. Ratios are never
reduced by a polynomial gcd; equality and ordering cross-multiply.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class DivergesAtZero(ArithmeticError):
    pass


class EpsilonPoly:
    """Polynomial with integer coefficients; ``coeffs[d]`` multiplies ``e**d``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def const(cls, c: int) -> "EpsilonPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, d: int) -> "EpsilonPoly":
        return cls([0] * d + [c])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def low_degree(self) -> int | None:
        """Lowest degree carrying a nonzero coefficient (None for zero)."""
        for d, c in enumerate(self.coeffs):
            if c:
                return d
        return None

    def low_coeff(self) -> int:
        d = self.low_degree()
        return 0 if d is None else self.coeffs[d]

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = EpsilonPoly.const(other)
        if not isinstance(other, EpsilonPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "EpsilonPoly") -> "EpsilonPoly":
        other = _poly(other)
        m = max(len(self.coeffs), len(other.coeffs))
        return EpsilonPoly(self[d] + other[d] for d in range(m))

    __radd__ = __add__

    def __neg__(self) -> "EpsilonPoly":
        return EpsilonPoly(-c for c in self.coeffs)

    def __sub__(self, other: "EpsilonPoly") -> "EpsilonPoly":
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other: "EpsilonPoly") -> "EpsilonPoly":
        other = _poly(other)
        if self.is_zero() or other.is_zero():
            return EpsilonPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        right = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in right:
                    out[i + j] += a * b
        return EpsilonPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EpsilonPoly":
        out = EpsilonPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"EpsilonPoly({list(self.coeffs)})"

    def __str__(self):
        return render(self)


def _poly(x) -> EpsilonPoly:
    if isinstance(x, EpsilonPoly):
        return x
    if isinstance(x, int):
        return EpsilonPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as EpsilonPoly")


ONE = EpsilonPoly.const(1)
ZERO = EpsilonPoly()
EPS = EpsilonPoly((0, 1))


def render(p: EpsilonPoly, var: str = "e") -> str:
    """``2*e^3 - 3*e^4`` style, terms in ascending degree."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for d, c in enumerate(p.coeffs):
        if not c:
            continue
        mag = abs(c)
        if d == 0:
            term = str(mag)
        else:
            mono = f"{var}^{d}"
            term = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


@lru_cache(maxsize=4096)
def env_weight(n: int, k: int) -> EpsilonPoly:
    """Prior weight e^(n-k) * (1-e)^k of one environment with k of n assumptions."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return EpsilonPoly([0] * (n - k) + [(-1) ** j * math.comb(k, j) for j in range(k + 1)])


def weighted_sum(counts: Sequence[int], n: int) -> EpsilonPoly:
    """Sum over cardinalities k of counts[k] * env_weight(n, k)."""
    out = [0] * (n + 1)
    for k, c in enumerate(counts):
        if c:
            w = env_weight(n, k).coeffs
            for d, a in enumerate(w):
                out[d] += c * a
    return EpsilonPoly(out)


class EpsilonRatio:
    """``num / den`` with the lowest nonzero coefficient of ``den`` positive."""

    __slots__ = ("num", "den")

    def __init__(self, num: EpsilonPoly, den: EpsilonPoly = ONE):
        num, den = _poly(num), _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("EpsilonRatio with zero denominator")
        if den.low_coeff() < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, EpsilonRatio):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is by cross-multiplication

    def __mul__(self, other: "EpsilonRatio") -> "EpsilonRatio":
        return EpsilonRatio(self.num * other.num, self.den * other.den)

    def __sub__(self, other: "EpsilonRatio") -> "EpsilonRatio":
        return EpsilonRatio(self.num * other.den - other.num * self.den, self.den * other.den)

    def __call__(self, x):
        return Fraction(self.num(x)) / Fraction(self.den(x)) if isinstance(x, (int, Fraction)) \
            else self.num(x) / self.den(x)

    def series(self, terms: int) -> list[Fraction]:
        """First ``terms`` Taylor coefficients of the ratio at e = 0.

        Requires the ratio to be bounded at 0.
        """
        dn = self.den.low_degree()
        nn = self.num.low_degree()
        if nn is None:
            return [Fraction(0)] * terms
        if nn < dn:
            raise DivergesAtZero(f"ratio diverges at 0: {self}")
        # shift both by den's low degree, then divide power series
        num = [Fraction(self.num[d + dn]) for d in range(terms)]
        den = [Fraction(self.den[d + dn]) for d in range(terms)]
        out: list[Fraction] = []
        for i in range(terms):
            acc = num[i] - sum(out[j] * den[i - j] for j in range(i))
            out.append(acc / den[0])
        return out

    def __repr__(self):
        return f"EpsilonRatio({self.num!r}, {self.den!r})"

    def __str__(self):
        return f"({render(self.num)}) / ({render(self.den)})"


def _ratio(x) -> EpsilonRatio:
    if isinstance(x, EpsilonRatio):
        return x
    if isinstance(x, Fraction):
        return EpsilonRatio(EpsilonPoly.const(x.numerator), EpsilonPoly.const(x.denominator))
    if isinstance(x, (int, EpsilonPoly)):
        return EpsilonRatio(_poly(x))
    raise TypeError(f"cannot use {type(x).__name__} as EpsilonRatio")


def limit_at_zero(r: EpsilonRatio) -> Fraction:
    if r.num.is_zero():
        return Fraction(0)
    nn, dn = r.num.low_degree(), r.den.low_degree()
    if nn < dn:
        raise DivergesAtZero(f"ratio diverges at 0: {r}")
    if nn > dn:
        return Fraction(0)
    return Fraction(r.num.coeffs[nn], r.den.coeffs[dn])


def order_at_zero(r: EpsilonRatio) -> float | int:
    """Asymptotic order ``d`` with ``r = Theta(e^d)``; ``math.inf`` for the zero ratio."""
    if r.num.is_zero():
        return math.inf
    return r.num.low_degree() - r.den.low_degree()


def sign_near_zero(p: EpsilonPoly) -> int:
    """Sign of ``p(e)`` for all sufficiently small e > 0."""
    c = p.low_coeff()
    return (c > 0) - (c < 0)


def eventually_greater(r1, r2) -> bool:
    """True iff r1(e) > r2(e) for every small enough e > 0.

    Both denominators are positive near 0 by construction, so the sign of
    num1*den2 - num2*den1 decides.
    """
    r1, r2 = _ratio(r1), _ratio(r2)
    return sign_near_zero(r1.num * r2.den - r2.num * r1.den) > 0
