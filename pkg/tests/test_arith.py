from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import legendre_symbol, primerange

from supercong.arith import (
    PadicContext,
    PadicResidue,
    as_rational,
    least_nonneg_residue,
    legendre,
    reduce_mod,
    s_factor,
    valuation_p,
)
from supercong.errors import NegativeValuation

SMALL_PRIMES = [3, 5, 7, 11, 13]


def p_integral(p):
    """Rationals whose denominator avoids p."""
    dens = st.integers(1, 10**6).filter(lambda d: d % p)
    return st.builds(Fraction, st.integers(-10**9, 10**9), dens)


def oracle_residue(r, p, k):
    # Independent path: modular inverse of the denominator, no valuation split.
    m = p**k
    return r.numerator * pow(r.denominator, -1, m) % m


class TestReduceMod:
    def test_seven_thirds(self):
        r = reduce_mod(Fraction(7, 3), PadicContext(5, 2))
        assert (r.valuation, r.unit) == (0, 19)

    def test_zero_is_canonical(self):
        ctx = PadicContext(7, 3)
        z = reduce_mod(0, ctx)
        assert (z.valuation, z.unit) == (3, 0)
        assert z == ctx.zero()

    def test_negative_valuation(self):
        with pytest.raises(NegativeValuation):
            reduce_mod(Fraction(1, 5), PadicContext(5, 2))

    def test_high_valuation_collapses(self):
        ctx = PadicContext(5, 2)
        assert reduce_mod(125, ctx).is_zero
        r = reduce_mod(Fraction(50, 3), ctx)
        assert r.valuation == 2 or r.is_zero

    def test_valuation_and_unit(self):
        ctx = PadicContext(5, 3)
        r = reduce_mod(Fraction(50, 7), ctx)
        assert r.valuation == 2
        assert r.unit % 5 != 0
        assert r.value == oracle_residue(Fraction(50, 7), 5, 3)

    @pytest.mark.parametrize("p", SMALL_PRIMES)
    @given(data=st.data())
    @settings(max_examples=200, deadline=None)
    def test_ring_homomorphism(self, p, data):
        ctx = PadicContext(p, 3)
        r = data.draw(p_integral(p))
        s = data.draw(p_integral(p))
        assert reduce_mod(r * s, ctx) == reduce_mod(r, ctx) * reduce_mod(s, ctx)
        assert reduce_mod(r + s, ctx) == reduce_mod(r, ctx) + reduce_mod(s, ctx)
        assert reduce_mod(r - s, ctx) == reduce_mod(r, ctx) - reduce_mod(s, ctx)

    @given(p_integral(7))
    @settings(max_examples=300, deadline=None)
    def test_matches_oracle(self, r):
        for k in (1, 2, 4):
            assert reduce_mod(r, PadicContext(7, k)).value == oracle_residue(r, 7, k)


class TestValuation:
    def test_examples(self):
        assert valuation_p(50, 5) == 2
        assert valuation_p(Fraction(7, 3), 5) == 0
        assert valuation_p(Fraction(3, 25), 5) == -2

    def test_zero_undefined(self):
        with pytest.raises(ValueError):
            valuation_p(0, 5)

    @given(st.integers(-5, 5), st.integers(1, 10**6).filter(lambda n: n % 7))
    def test_power_times_unit(self, e, u):
        assert valuation_p(Fraction(7) ** e * u, 7) == e


class TestResidues:
    def test_least_nonneg_residue_examples(self):
        assert least_nonneg_residue(Fraction(1, 2), 7) == 3
        assert least_nonneg_residue(-2, 5) == 2
        assert least_nonneg_residue(Fraction(1, 3), 7) == 2

    def test_least_nonneg_residue_rejects_non_integral(self):
        with pytest.raises(NegativeValuation):
            least_nonneg_residue(Fraction(1, 7), 7)

    def test_s_factor_examples(self):
        assert s_factor(Fraction(1, 2), 7) == Fraction(1, 2)
        assert s_factor(-3, 5) == 0
        assert s_factor(Fraction(1, 3), 7) == Fraction(1, 3)

    @pytest.mark.parametrize("p", SMALL_PRIMES)
    @given(data=st.data())
    @settings(max_examples=100, deadline=None)
    def test_residue_and_s_factor(self, p, data):
        alpha = data.draw(p_integral(p))
        a = least_nonneg_residue(alpha, p)
        assert 0 <= a < p
        assert reduce_mod(alpha + a, PadicContext(p, 1)).is_zero
        s = s_factor(alpha, p)
        assert s == 0 or valuation_p(s, p) >= 0


class TestLegendre:
    def test_examples(self):
        assert legendre(-1, 5) == 1
        assert legendre(-1, 7) == -1
        assert legendre(5, 3) == -1

    @pytest.mark.parametrize("p", list(primerange(3, 100)))
    def test_exhaustive_against_sympy_and_euler(self, p):
        for a in range(1, p):
            euler = pow(a, (p - 1) // 2, p)
            assert legendre(a, p) % p == euler
            assert legendre(a, p) == legendre_symbol(a, p)
        assert legendre(p, p) == 0


class TestPadicResidue:
    def test_context_validation(self):
        with pytest.raises(ValueError):
            PadicContext(9, 2)
        with pytest.raises(ValueError):
            PadicContext(2, 2)
        with pytest.raises(ValueError):
            PadicContext(5, 0)
        assert PadicContext(5, 3).modulus == 125

    def test_arithmetic_and_inverse(self):
        ctx = PadicContext(5, 2)
        x = ctx.residue(Fraction(7, 3))
        assert (x * x.inverse()) == ctx.one()
        assert x / x == 1
        assert x ** 3 == reduce_mod(Fraction(343, 27), ctx)

    def test_congruent_at_lower_precision(self):
        ctx = PadicContext(5, 3)
        a, b = ctx.residue(1), ctx.residue(26)
        assert a != b
        assert a.congruent(b, 2)
        assert not a.congruent(b, 3)

    def test_from_int_and_str(self):
        ctx = PadicContext(3, 2)
        r = PadicResidue.from_int(-2, ctx)
        assert r.value == 7 and str(r) == "7" and int(r) == 7

    def test_as_rational_strings(self):
        assert as_rational("-3/4") == Fraction(-3, 4)
        with pytest.raises(TypeError):
            as_rational(0.5)
