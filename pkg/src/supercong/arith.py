"""Exact rationals, p-adic valuations and residues in Z/p^k.

``Rational`` is :class:`fractions.Fraction`; it already normalizes eagerly
(reduced, positive denominator), which is all the artifact needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

from sympy import isprime

from .errors import NegativeValuation, PrecisionError, UnitRequired

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"-3/4"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)) or isinstance(x, _RationalABC):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_p(r: RationalLike, p: int) -> int:
    """Return v_p(r) = v_p(numerator) - v_p(denominator).

    >>> valuation_p(50, 5), valuation_p(Fraction(3, 25), 5)
    (2, -2)
    """
    r = as_rational(r)
    if r == 0:
        raise ValueError("the p-adic valuation of 0 is undefined")
    return _vp_int(r.numerator, p) - _vp_int(r.denominator, p)


def is_p_integral(r: RationalLike, p: int) -> bool:
    r = as_rational(r)
    return r.denominator % p != 0


@dataclass(frozen=True)
class PadicContext:
    """An odd prime ``p`` together with a precision exponent ``k``."""

    p: int
    k: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"precision k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "modulus", self.p**self.k)

    def with_precision(self, k: int) -> "PadicContext":
        return PadicContext(self.p, k)

    def residue(self, x: RationalLike) -> "PadicResidue":
        return reduce_mod(x, self)

    def zero(self) -> "PadicResidue":
        return PadicResidue(self.k, 0, self)

    def one(self) -> "PadicResidue":
        return PadicResidue(0, 1, self)


@dataclass(frozen=True, eq=False)
class PadicResidue:
    """An element ``p**valuation * unit`` of Z/p^k.

    The unit is exact modulo ``p**(k - valuation)``; reduce_mod keeps it modulo
    ``p**k`` when the source is an exact rational, but only the absolute value
    modulo p^k takes part in comparisons.  Zero is ``(valuation=k, unit=0)``.
    """

    valuation: int
    unit: int
    context: PadicContext

    @classmethod
    def from_int(cls, n: int, ctx: PadicContext) -> "PadicResidue":
        n %= ctx.modulus
        if n == 0:
            return cls(ctx.k, 0, ctx)
        v = _vp_int(n, ctx.p)
        return cls(v, n // ctx.p**v, ctx)

    @property
    def value(self) -> int:
        """Canonical representative in [0, p^k)."""
        if self.valuation >= self.context.k:
            return 0
        return (self.context.p**self.valuation * self.unit) % self.context.modulus

    @property
    def modulus(self) -> int:
        return self.context.modulus

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.valuation == 0 and self.unit % self.context.p != 0

    def _coerce(self, other) -> "PadicResidue":
        if isinstance(other, PadicResidue):
            if other.context != self.context:
                raise PrecisionError(f"cannot combine residues from {self.context} and {other.context}")
            return other
        return reduce_mod(other, self.context)

    def __add__(self, other):
        other = self._coerce(other)
        return PadicResidue.from_int(self.value + other.value, self.context)

    __radd__ = __add__

    def __neg__(self):
        return PadicResidue.from_int(-self.value, self.context)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        v = self.valuation + other.valuation
        if v >= self.context.k:
            return self.context.zero()
        return PadicResidue(v, self.unit * other.unit % self.context.modulus, self.context)

    __rmul__ = __mul__

    def inverse(self) -> "PadicResidue":
        if not self.is_unit():
            raise UnitRequired(f"{self} is not invertible modulo {self.context.modulus}")
        return PadicResidue(0, pow(self.unit, -1, self.context.modulus), self.context)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.context.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, PadicResidue):
            return self.context == other.context and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self == reduce_mod(other, self.context)
            except NegativeValuation:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.context.p, self.context.k, self.value))

    def congruent(self, other, k: int | None = None) -> bool:
        """Compare modulo p^k (default: the context precision)."""
        other = self._coerce(other)
        k = self.context.k if k is None else k
        if k > self.context.k:
            raise PrecisionError(f"residues only known modulo p^{self.context.k}")
        m = self.context.p**k
        return self.value % m == other.value % m

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return (
            f"PadicResidue(valuation={self.valuation}, unit={self.unit}, "
            f"p={self.context.p}, k={self.context.k})"
        )


def reduce_mod(r: RationalLike, ctx: PadicContext) -> PadicResidue:
    """Embed a p-adic integral rational into Z/p^k.

    >>> reduce_mod(Fraction(7, 3), PadicContext(5, 2)).unit
    19
    """
    r = as_rational(r)
    if r == 0:
        return ctx.zero()
    v = valuation_p(r, ctx.p)
    if v < 0:
        raise NegativeValuation(r, ctx.p)
    if v >= ctx.k:
        return ctx.zero()
    m = ctx.modulus
    unit = r / ctx.p**v
    return PadicResidue(v, unit.numerator * pow(unit.denominator, -1, m) % m, ctx)


def least_nonneg_residue(alpha: RationalLike, p: int) -> int:
    """The least nonnegative residue of ``-alpha`` modulo p."""
    alpha = as_rational(alpha)
    if alpha.denominator % p == 0:
        raise NegativeValuation(alpha, p)
    return -alpha.numerator * pow(alpha.denominator, -1, p) % p


def s_factor(alpha: RationalLike, p: int) -> Fraction:
    """``(alpha + <-alpha>_p) / p``; always a p-adic integer."""
    alpha = as_rational(alpha)
    return (alpha + least_nonneg_residue(alpha, p)) / p


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_unit(alpha: RationalLike, p: int) -> bool:
    """True when alpha lies in Z_p^x."""
    alpha = as_rational(alpha)
    return alpha != 0 and alpha.denominator % p != 0 and alpha.numerator % p != 0
