"""Pochhammer symbols, truncated hypergeometric sums and Apery numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .arith import PadicContext, PadicResidue, RationalLike, as_rational, reduce_mod
from .errors import DenominatorZero, NegativeValuation


def pochhammer(alpha: RationalLike, j: int) -> Fraction:
    """Rising factorial alpha (alpha+1) ... (alpha+j-1); 1 when j = 0."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    alpha = as_rational(alpha)
    result = Fraction(1)
    for i in range(j):
        result *= alpha + i
    return result


def binom_rational(alpha: RationalLike, j: int) -> Fraction:
    """Generalized binomial coefficient alpha (alpha-1) ... (alpha-j+1) / j!."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    alpha = as_rational(alpha)
    result = Fraction(1)
    for i in range(j):
        result = result * (alpha - i) / (i + 1)
    return result


@dataclass(frozen=True)
class HyperSpec:
    """One truncated sum  sum_{k=0}^{n} prod (a_i)_k / prod (b_i)_k * z^k / k!."""

    upper: tuple
    lower: tuple
    argument: Fraction = Fraction(1)
    truncation: int = 0
    poised: bool = False
    pairs: tuple = field(init=False, repr=False, compare=False)
    rest_upper: tuple = field(init=False, repr=False, compare=False)
    rest_lower: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(as_rational(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(as_rational(b) for b in self.lower))
        object.__setattr__(self, "argument", as_rational(self.argument))
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")
        # Pair each upper u with a lower u - 1: (u)_k / (u-1)_k == (u-1+k)/(u-1).
        # A poised spec pairs upper[1] with lower[0] unconditionally, so a
        # nonpositive integer alpha/2 takes the limiting factor (alpha+2k)/alpha.
        # Other nonpositive integer lowers are never paired, since the identity
        # breaks once (u-1)_k vanishes and the series may terminate there.
        upper, lower, pairs = list(self.upper), list(self.lower), []
        if self.poised:
            if not lower or len(upper) < 2 or upper[1] != lower[0] + 1:
                raise ValueError("poised spec needs upper[1] == lower[0] + 1")
            pairs.append(lower.pop(0))
            del upper[1]
        for b in list(lower):
            if b.denominator == 1 and b <= 0:
                continue
            if b + 1 in upper:
                upper.remove(b + 1)
                lower.remove(b)
                pairs.append(b)
        object.__setattr__(self, "pairs", tuple(pairs))
        object.__setattr__(self, "rest_upper", tuple(upper))
        object.__setattr__(self, "rest_lower", tuple(lower))

    @property
    def standard_shape(self) -> bool:
        """True for the (r+1)F_r shape."""
        return len(self.upper) == len(self.lower) + 1

    def with_truncation(self, n: int) -> "HyperSpec":
        return HyperSpec(self.upper, self.lower, self.argument, n, self.poised)


def well_poised(alpha: RationalLike, extra_upper: Sequence = (), extra_lower: Sequence = (),
                argument: RationalLike = 1, truncation: int = 0) -> HyperSpec:
    """The series with upper (alpha, 1+alpha/2, *extra_upper), lower (alpha/2, *extra_lower)."""
    alpha = as_rational(alpha)
    return HyperSpec((alpha, 1 + alpha / 2, *extra_upper), (alpha / 2, *extra_lower),
                     argument, truncation, poised=True)


def _pair_factor(pairs, k):
    f = Fraction(1)
    for b in pairs:
        f = f * (b + k) / b
    return f


def truncated_hyper(spec: HyperSpec) -> Fraction:
    """Exact value of the truncated series.

    Well-poised pairs contribute (b+k)/b.  Once a numerator factor is exactly
    zero every later term vanishes and the sum terminates there.
    """
    for b in spec.pairs:
        if b == 0:
            raise DenominatorZero(0, b)
    total = Fraction(0)
    term = Fraction(1)
    z = spec.argument
    for k in range(spec.truncation + 1):
        total += term * _pair_factor(spec.pairs, k)
        if k == spec.truncation:
            break
        num = Fraction(1)
        for a in spec.rest_upper:
            num *= a + k
        if num == 0 or z == 0:
            break
        den = Fraction(k + 1)
        for b in spec.rest_lower:
            if b + k == 0:
                raise DenominatorZero(k + 1, b)
            den *= b + k
        term = term * num * z / den
    return total


def modular_path_ok(spec: HyperSpec, p: int) -> bool:
    """Pre-scan: is every term of the series p-integral with unit denominators?"""
    n = spec.truncation
    if n >= p:
        return False
    params = spec.upper + spec.lower + (spec.argument,)
    if any(x.denominator % p == 0 for x in params):
        return False
    for b in spec.pairs:
        if b.numerator % p == 0:
            return False
    for b in spec.rest_lower:
        if any((b + i).numerator % p == 0 for i in range(n)):
            return False
    return True


def _hyper_mod_fast(spec: HyperSpec, ctx: PadicContext) -> PadicResidue:
    m = ctx.modulus

    def r(x):
        return x.numerator * pow(x.denominator, -1, m) % m

    z = r(spec.argument)
    inv_pairs = [pow(r(b), -1, m) for b in spec.pairs]
    total = 0
    term = 1
    for k in range(spec.truncation + 1):
        f = term
        for b, ib in zip(spec.pairs, inv_pairs):
            f = f * r(b + k) % m * ib % m
        total += f
        if k == spec.truncation:
            break
        num = z
        for a in spec.rest_upper:
            num = num * r(a + k) % m
        den = k + 1
        for b in spec.rest_lower:
            den = den * r(b + k) % m
        term = term * num % m * pow(den, -1, m) % m
    return PadicResidue.from_int(total, ctx)


def truncated_hyper_mod(spec: HyperSpec, ctx: PadicContext, p_power: int = 0) -> PadicResidue:
    """Residue of ``p**p_power * truncated_hyper(spec)`` modulo p^k.

    Uses modular arithmetic when a pre-scan proves every term p-integral and
    the exact rational sum otherwise.  Raises NegativeValuation when the
    (scaled) sum is not p-integral.
    """
    if p_power == 0 and modular_path_ok(spec, ctx.p):
        return _hyper_mod_fast(spec, ctx)
    value = truncated_hyper(spec) * Fraction(ctx.p) ** p_power
    return reduce_mod(value, ctx)


# Apery numbers

def apery(n: int) -> int:
    """A_n = sum_k C(n+k,k)^2 C(n,k)^2."""
    return sum(comb(n + k, k) ** 2 * comb(n, k) ** 2 for k in range(n + 1))


def apery_alt(n: int) -> int:
    """A_n via the second formula sum_k C(n+k,2k)^2 C(2k,k)^2."""
    return sum(comb(n + k, 2 * k) ** 2 * comb(2 * k, k) ** 2 for k in range(n + 1))


def _recurrence_coeff(n: int) -> int:
    return 34 * n**3 + 51 * n**2 + 27 * n + 5


@dataclass(frozen=True)
class AperySequence:
    """A_0, ..., A_N generated by the three-term recurrence

    (n+1)^3 A_{n+1} = (34n^3 + 51n^2 + 27n + 5) A_n - n^3 A_{n-1}.
    """

    values: tuple

    @classmethod
    def up_to(cls, N: int) -> "AperySequence":
        vals = [1, 5][: N + 1]
        for n in range(1, N):
            nxt, rem = divmod(_recurrence_coeff(n) * vals[n] - n**3 * vals[n - 1], (n + 1) ** 3)
            assert rem == 0
            vals.append(nxt)
        return cls(tuple(vals))

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def mismatches(self) -> list[int]:
        """Indices where the recurrence disagrees with either defining sum."""
        return [n for n, a in enumerate(self.values) if a != apery(n) or a != apery_alt(n)]


def apery_mod_sequence(N: int, ctx: PadicContext) -> list[int]:
    """A_0..A_N modulo p^k via the recurrence; requires N < p so (n+1)^3 is invertible."""
    m = ctx.modulus
    if N >= ctx.p:
        raise ValueError("recurrence modulo p^k needs N < p")
    vals = [1, 5 % m][: N + 1]
    for n in range(1, N):
        inv = pow((n + 1) ** 3, -1, m)
        vals.append((_recurrence_coeff(n) * vals[n] - n**3 * vals[n - 1]) * inv % m)
    return vals


def apery_partial_sum_mod(p: int, k: int) -> PadicResidue:
    """sum_{n=0}^{p-1} A_n modulo p^k."""
    ctx = PadicContext(p, k)
    return PadicResidue.from_int(sum(apery_mod_sequence(p - 1, ctx)), ctx)


# Convolution sums  sum_k eps^k (2k+1)^e sum_j C(-x,j)^m C(x-1,k-j)^m

def binomial_double_sum_naive(x: RationalLike, m: int, eps: int, n: int, power: int = 1) -> Fraction:
    """Direct O(n^2) evaluation over k < n; the reference for the fast version."""
    x = as_rational(x)
    total = Fraction(0)
    for k in range(n):
        inner = sum(binom_rational(-x, j) ** m * binom_rational(x - 1, k - j) ** m for j in range(k + 1))
        total += eps**k * (2 * k + 1) ** power * inner
    return total


def _convolve_prefix(b1, b2, eps, n, power, add, mul, zero):
    # Swap the order: sum_j eps^j b1_j * sum_{i <= n-1-j} eps^i (2i+1+2j)^power b2_i,
    # with (2i+1+2j)^e expanded binomially so the inner sums become prefix sums.
    prefix = []
    for s in range(power + 1):
        acc, row = zero, []
        for i in range(n):
            w = (2 * i + 1) ** s * (1 if eps == 1 or i % 2 == 0 else -1)
            acc = add(acc, mul(w, b2[i]))
            row.append(acc)
        prefix.append(row)
    total = zero
    for j in range(n):
        top = n - 1 - j
        inner = zero
        for t in range(power + 1):
            inner = add(inner, mul(comb(power, t) * (2 * j) ** t, prefix[power - t][top]))
        sign = 1 if eps == 1 or j % 2 == 0 else -1
        total = add(total, mul(sign, mul(b1[j], inner)))
    return total


def binomial_double_sum(x: RationalLike, m: int, eps: int, n: int, power: int = 1) -> Fraction:
    """Exact sum_{k<n} eps^k (2k+1)^power sum_{j<=k} C(-x,j)^m C(x-1,k-j)^m in O(n*power)."""
    x = as_rational(x)
    b1, b2 = [], []
    c1 = c2 = Fraction(1)
    for j in range(n):
        b1.append(c1**m)
        b2.append(c2**m)
        c1 = c1 * (-x - j) / (j + 1)
        c2 = c2 * (x - 1 - j) / (j + 1)
    return _convolve_prefix(b1, b2, eps, n, power,
                            lambda a, b: a + b, lambda a, b: a * b, Fraction(0))


def binomial_double_sum_mod(x: RationalLike, m: int, eps: int, ctx: PadicContext,
                            n: int | None = None, power: int = 1) -> PadicResidue:
    """The same sum modulo p^k; every binomial C(y, j) with y in Z_p and j < p is p-integral."""
    x = as_rational(x)
    n = ctx.p if n is None else n
    if x.denominator % ctx.p == 0:
        raise NegativeValuation(x, ctx.p)
    if n > ctx.p:
        return reduce_mod(binomial_double_sum(x, m, eps, n, power), ctx)
    mod = ctx.modulus
    xr = reduce_mod(x, ctx).value
    b1, b2 = [], []
    c1 = c2 = 1
    for j in range(n):
        b1.append(pow(c1, m, mod))
        b2.append(pow(c2, m, mod))
        if j + 1 == n:
            break
        inv = pow(j + 1, -1, mod)
        c1 = c1 * (-xr - j) % mod * inv % mod
        c2 = c2 * (xr - 1 - j) % mod * inv % mod
    total = _convolve_prefix(b1, b2, eps, n, power,
                             lambda a, b: (a + b) % mod, lambda a, b: a * b % mod, 0)
    return PadicResidue.from_int(total, ctx)
