"""Morita's p-adic Gamma function modulo p^k.

Gamma_p is 1-Lipschitz on Z_p for odd p, so Gamma_p(x) mod p^k depends only
on x mod p^k.  Every evaluation reduces its argument to n in [0, p^k) and
returns Gamma_p(n) = (-1)^n * prod(j for 1 <= j < n if p does not divide j).
"""

from __future__ import annotations

from array import array
from functools import lru_cache

from .arith import PadicContext, PadicResidue, RationalLike, as_rational, least_nonneg_residue, reduce_mod
from .errors import NegativeValuation

# Above this modulus a full table is not built implicitly.
TABLE_LIMIT = 1 << 22


def _check_int_arg(n: int):
    if n < 0:
        raise ValueError(f"integer argument must be nonnegative, got {n}")


def gamma_p_direct(n: int, ctx: PadicContext) -> PadicResidue:
    """Straight from the defining product, with no reduction of n; O(n).  The reference oracle."""
    _check_int_arg(n)
    m = ctx.modulus
    prod = 1
    for j in range(1, n):
        if j % ctx.p:
            prod = prod * j % m
    return PadicResidue.from_int(-prod if n % 2 else prod, ctx)


def _block_polynomial(p: int, k: int) -> list[int]:
    """Coefficients of prod_{t=1}^{p-1} (X + t) modulo (X^k, p^k)."""
    m = p**k
    coeffs = [1] + [0] * (k - 1)
    for t in range(1, p):
        nxt = [0] * k
        for i, c in enumerate(coeffs):
            if c:
                nxt[i] = (nxt[i] + c * t) % m
                if i + 1 < k:
                    nxt[i + 1] = (nxt[i + 1] + c) % m
        coeffs = nxt
    return coeffs


def _coprime_product(n: int, p: int, k: int) -> int:
    """prod_{1 <= j < n, p does not divide j} j mod p^k in O(p*k + (n/p)*k).

    Blocks [ip+1, ip+p-1] equal F(ip) with F the block polynomial; since
    (ip)^k vanishes mod p^k only k coefficients of F matter.
    """
    m = p**k
    q, r = divmod(n, p)
    coeffs = _block_polynomial(p, k)
    prod = 1
    for i in range(q):
        x = i * p % m
        val = 0
        for c in reversed(coeffs):
            val = (val * x + c) % m
        prod = prod * val % m
    base = q * p
    for t in range(1, r):
        prod = prod * (base + t) % m
    return prod


def gamma_p_int(n: int, ctx: PadicContext) -> PadicResidue:
    """Gamma_p(n) mod p^k for an integer n >= 0; n is first reduced mod p^k."""
    _check_int_arg(n)
    n %= ctx.modulus
    prod = _coprime_product(n, ctx.p, ctx.k)
    return PadicResidue.from_int(-prod if n % 2 else prod, ctx)


class GammaTable:
    """All values Gamma_p(n) mod p^k for n in [0, p^k), built once per context.

    Construction walks the functional equation
    Gamma_p(n+1) = -n Gamma_p(n) (p does not divide n), -Gamma_p(n) otherwise.
    """

    def __init__(self, ctx: PadicContext):
        self.context = ctx
        p, m = ctx.p, ctx.modulus
        if m > TABLE_LIMIT:
            raise ValueError(f"refusing to tabulate {m} values; use gamma_p_int")
        values = array("q", [0]) * m
        g = 1
        values[0] = 1
        for n in range(m - 1):
            g = -g * (n if n % p else 1) % m
            values[n + 1] = g
        self._values = values

    def __len__(self):
        return len(self._values)

    def __getitem__(self, n: int) -> int:
        return self._values[n]

    def at_int(self, n: int) -> PadicResidue:
        _check_int_arg(n)
        n %= self.context.modulus
        return PadicResidue(0, self._values[n], self.context)

    def __call__(self, x: RationalLike) -> PadicResidue:
        return self.at_int(reduce_mod(x, self.context).value)

    @classmethod
    def for_context(cls, ctx: PadicContext) -> "GammaTable":
        return _cached_table(ctx)


@lru_cache(maxsize=4)
def _cached_table(ctx: PadicContext) -> GammaTable:
    return GammaTable(ctx)


def gamma_p(x: RationalLike, ctx: PadicContext, table: GammaTable | None = None) -> PadicResidue:
    """Gamma_p(x) mod p^k for a p-adic integral rational x.

    >>> gamma_p(Fraction(1, 2), PadicContext(7, 1)).value
    6
    """
    x = as_rational(x)
    if x.denominator % ctx.p == 0:
        raise NegativeValuation(x, ctx.p)
    n = reduce_mod(x, ctx).value
    if table is not None:
        if table.context != ctx:
            raise ValueError("table built for a different context")
        return table.at_int(n)
    return gamma_p_int(n, ctx)


def reflection_sign(z: RationalLike, ctx: PadicContext) -> int:
    """(-1)^(p - <-z>_p), the value of Gamma_p(z) Gamma_p(1-z)."""
    a = least_nonneg_residue(z, ctx.p)
    return -1 if (ctx.p - a) % 2 else 1


def gamma_ratio(num: list[RationalLike], den: list[RationalLike], ctx: PadicContext,
                table: GammaTable | None = None) -> PadicResidue:
    """prod Gamma_p(num) / prod Gamma_p(den); Gamma_p values are always units."""
    result = ctx.one()
    for x in num:
        result = result * gamma_p(x, ctx, table)
    for x in den:
        result = result / gamma_p(x, ctx, table)
    return result
