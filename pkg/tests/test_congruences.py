from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from supercong.arith import PadicContext, least_nonneg_residue, reduce_mod, s_factor
from supercong.congruences import (
    CrossCheck,
    CubicCase,
    PowerCase,
    classify_3f2_case,
    classify_4f3_case,
    cornacchia_x2_2y2,
    g_p,
    h_p,
    represent_x2_2y2,
    sigma_products,
    verify_4f3_neg,
    verify_4f3_unit,
    verify_apery,
    verify_apery_3f2,
    verify_apery_gamma,
    verify_apery_triangle,
    verify_crosscheck,
    verify_cubic_sums,
    verify_power_sums,
    verify_sigma_reduction,
)
from supercong.errors import NegativeValuation, PreconditionUnmet, UnitRequired
from supercong.hyper import apery, binom_rational, pochhammer
from supercong.results import Verdict


def gamma_oracle(x, p, k):
    # Gamma_p(x) mod p^k from the defining product at the integer n = x mod p^k.
    m = p**k
    x = Fraction(x)
    n = x.numerator * pow(x.denominator, -1, m) % m
    return (-1) ** n * prod(j for j in range(1, n) if j % p) % m


def wp_4f3_exact(alpha, z, n):
    # Very-well-poised 4F3 term by term, using the closed factor (alpha + 2k)/alpha.
    total = Fraction(0)
    for k in range(n + 1):
        total += Fraction(alpha + 2 * k, alpha) * pochhammer(alpha, k) ** 3 / factorial(k) ** 3 * Fraction(z) ** k
    return total


def residue(r, p, k):
    m = p**k
    r = Fraction(r)
    return r.numerator * pow(r.denominator, -1, m) % m


def conv_sum(x, m, eps, p):
    # The binomial double sum straight from its definition.
    total = Fraction(0)
    for k in range(p):
        inner = sum(binom_rational(-x, j) ** m * binom_rational(x - 1, k - j) ** m for j in range(k + 1))
        total += eps**k * (2 * k + 1) * inner
    return total


class TestQuadraticForm:
    def test_examples(self):
        r = represent_x2_2y2(3)
        assert (r.x, r.y, r.found) == (1, 1, True)
        r = represent_x2_2y2(11)
        assert (r.x, r.y, r.found) == (3, 1, True)
        assert not represent_x2_2y2(5).found

    @pytest.mark.parametrize("p", list(primerange(3, 1000)))
    def test_found_iff_residue_class(self, p):
        r = represent_x2_2y2(p)
        assert r.found == (p % 8 in (1, 3))
        if r.found:
            assert r.x**2 + 2 * r.y**2 == p and r.x >= 0 and r.y >= 0

    @pytest.mark.parametrize("p", list(primerange(3, 200)))
    def test_cornacchia_matches_search(self, p):
        fast, slow = cornacchia_x2_2y2(p), represent_x2_2y2(p)
        assert fast.found == slow.found
        if fast.found:
            # the representation is unique up to signs
            assert (fast.x, fast.y) == (slow.x, slow.y)


class TestGammaCombinations:
    def test_h_examples(self):
        for alpha, p in ((Fraction(1, 2), 7), (Fraction(1, 3), 7)):
            num = gamma_oracle((1 + alpha) / 2, p, 1) * gamma_oracle((1 - 3 * alpha) / 2, p, 1)
            den = gamma_oracle(1 + alpha, p, 1) * gamma_oracle(1 - alpha, p, 1) * gamma_oracle((1 - alpha) / 2, p, 1) ** 2
            assert h_p(alpha, PadicContext(p, 1)).value == num * pow(den, -1, p) % p

    def test_g_examples(self):
        for alpha, p in ((Fraction(1, 2), 7), (Fraction(1, 3), 5)):
            num = gamma_oracle(1 + alpha / 2, p, 1) * gamma_oracle(1 - 3 * alpha / 2, p, 1)
            den = gamma_oracle(1 + alpha, p, 1) * gamma_oracle(1 - alpha, p, 1) * gamma_oracle(1 - alpha / 2, p, 1) ** 2
            assert g_p(alpha, PadicContext(p, 1)).value == num * pow(den, -1, p) % p

    @pytest.mark.parametrize("p", [5, 7, 11])
    @given(st.integers(-40, 40), st.integers(1, 30))
    @settings(max_examples=30, deadline=None)
    def test_units(self, p, a, b):
        if b % p == 0:
            return
        ctx = PadicContext(p, 2)
        assert h_p(Fraction(a, b), ctx).is_unit
        assert g_p(Fraction(a, b), ctx).is_unit

    def test_negative_valuation(self):
        with pytest.raises(NegativeValuation):
            h_p(Fraction(1, 7), PadicContext(7, 1))


class TestCaseSplit:
    @pytest.mark.parametrize("p", list(primerange(5, 100)))
    def test_4f3_exhaustive_at_thresholds(self, p):
        # every residue a lands in exactly the branch its parity and size dictate
        for a in range(1, p):
            label = classify_4f3_case(p, -a)
            if a % 2:
                assert label.parity == "odd" and label.small == (a < Fraction(2 * p + 1, 3))
            else:
                assert label.parity == "even" and label.small == (a < Fraction(p + 1, 3))

    @given(st.sampled_from(list(primerange(5, 60))), st.integers(-200, 200), st.integers(1, 50))
    def test_3f2_total(self, p, a, b):
        if b % p == 0:
            return
        alpha = Fraction(a, b)
        label = classify_3f2_case(p, alpha)
        r = least_nonneg_residue(alpha, p)
        assert label.parity == ("even" if r % 2 == 0 else "odd")
        limit = Fraction(2 * p, 3) if r % 2 == 0 else Fraction(p, 3)
        assert label.small == (r < limit)

    def test_examples(self):
        assert str(classify_4f3_case(7, Fraction(1, 2))) == "odd,<(2p+1)/3"
        assert str(classify_4f3_case(7, Fraction(1, 3))) == "even,<(p+1)/3"
        assert classify_4f3_case(5, Fraction(3, 4)).small


class TestApery:
    def test_examples(self):
        r = verify_apery(3)
        assert r.passed and r.lhs.value == 7 and r.rhs.value == 7  # -2 mod 9
        assert sum(apery(n) for n in range(3)) == 79
        for p in (5, 7):
            r = verify_apery(p)
            assert r.passed and r.lhs.is_zero and r.rhs.is_zero

    def test_gamma_examples(self):
        assert verify_apery_gamma(3).rhs.value == 7
        assert verify_apery_gamma(5).rhs.is_zero and verify_apery_gamma(5).passed
        r = verify_apery_gamma(11)
        assert r.passed and r.rhs.value == 14

    def test_gamma_rhs_from_oracle(self):
        for p in (3, 11, 17, 19):
            g = gamma_oracle(Fraction(1, 8), p, 2) * gamma_oracle(Fraction(3, 8), p, 2)
            sign = -1 if p % 4 == 1 else 1
            assert verify_apery_gamma(p).rhs.value == sign * g * g % p**2

    @pytest.mark.parametrize("p", [p for p in primerange(3, 200) if p % 8 in (1, 3)])
    def test_triangle(self, p):
        assert verify_apery_triangle(p).passed
        assert verify_apery(p).rhs == verify_apery_gamma(p).rhs

    def test_triangle_precondition(self):
        with pytest.raises(PreconditionUnmet):
            verify_apery_triangle(7)

    @pytest.mark.parametrize("p", [3, 11, 17])
    def test_apery_3f2(self, p):
        r = verify_apery_3f2(p)
        assert r.passed and r.modulus == p * p
        assert "mod p^3" in r.note

    def test_stronger_modulus_is_reported_not_assumed(self):
        r = verify_apery(3, k=3)
        assert r.modulus == 27

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            verify_apery(9)


class TestWellPoised4F3:
    @pytest.mark.parametrize("p,alpha", [(7, Fraction(1, 2)), (7, Fraction(1, 3)), (5, Fraction(3, 4))])
    def test_unit_examples(self, p, alpha):
        r = verify_4f3_unit(p, alpha)
        assert r.passed and r.modulus == p**3
        assert r.lhs.value == residue(wp_4f3_exact(alpha, 1, p - 1), p, 3)

    def test_unit_rhs_from_oracle(self):
        # (p=7, alpha=1/2) is the small odd case: rhs = 2 h_7(1/2)
        p, alpha = 7, Fraction(1, 2)
        g = lambda x: gamma_oracle(x, p, 3)
        h = g((1 + alpha) / 2) * g((1 - 3 * alpha) / 2) * pow(
            g(1 + alpha) * g(1 - alpha) * g((1 - alpha) / 2) ** 2, -1, p**3)
        assert verify_4f3_unit(p, alpha).rhs.value == 2 * h % p**3
        # (p=7, alpha=1/3) is the small even case: rhs = s p h
        alpha = Fraction(1, 3)
        h = g((1 + alpha) / 2) * g((1 - 3 * alpha) / 2) * pow(
            g(1 + alpha) * g(1 - alpha) * g((1 - alpha) / 2) ** 2, -1, p**3)
        assert verify_4f3_unit(p, alpha).rhs.value == residue(s_factor(alpha, p) * p * h, p, 3)

    def test_unit_errors(self):
        with pytest.raises(UnitRequired):
            verify_4f3_unit(7, 7)
        with pytest.raises(NegativeValuation):
            verify_4f3_unit(7, Fraction(1, 7))

    def test_failure_records_swap(self):
        # at p = 3 the small odd case fails mod 27 for alpha = 1/2; the note says what the swap gives
        r = verify_4f3_unit(3, Fraction(1, 2))
        assert r.verdict is Verdict.FAIL
        assert "swapped parity convention" in r.note
        assert verify_4f3_unit(3, Fraction(1, 2), k=2).passed

    def test_neg_examples(self):
        r = verify_4f3_neg(7, Fraction(1, 2))
        assert r.passed and r.modulus == 343
        assert r.lhs.value == residue(wp_4f3_exact(Fraction(1, 2), -1, 6), 7, 3)
        r = verify_4f3_neg(5, 2)
        assert r.passed and r.rhs.valuation == 1

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_neg_degenerate_zero(self, p):
        for j in range(1, p):
            r = verify_4f3_neg(p, -j)
            assert r.passed and r.lhs.is_zero and r.rhs.is_zero
            assert "terminating case" in r.note
        assert wp_4f3_exact(Fraction(-1), -1, p - 1) == 0

    @pytest.mark.parametrize("p", [5, 7, 11])
    @given(st.integers(-30, 30), st.integers(1, 12))
    @settings(max_examples=25, deadline=None)
    def test_lhs_is_integral_on_conforming_inputs(self, p, a, b):
        alpha = Fraction(a, b)
        if b % p == 0 or alpha.numerator % p == 0:
            return
        # reduce_mod raises NegativeValuation if an lhs were not p-integral
        reduce_mod(wp_4f3_exact(alpha, 1, p - 1), PadicContext(p, 3))
        reduce_mod(wp_4f3_exact(alpha, -1, p - 1), PadicContext(p, 3))


class TestSigmaReduction:
    @pytest.mark.parametrize("p,x,m,eps", [(5, Fraction(1, 2), 3, 1), (3, Fraction(2), 3, -1),
                                           (7, Fraction(1, 3), 4, -1)])
    def test_examples(self, p, x, m, eps):
        r = verify_sigma_reduction(p, x, m, eps)
        assert r.passed and r.modulus == p**m
        assert r.lhs.value == residue(conv_sum(x, m, eps, p), p, m)

    @pytest.mark.parametrize("p", list(primerange(3, 14)))
    def test_exhaustive_grid(self, p):
        for x in ("1/2", "1/3", "2/3", "1/4", "2", "5"):
            x = Fraction(x)
            if x.denominator % p == 0:
                continue
            for m in range(1, 5):
                for eps in (1, -1):
                    assert verify_sigma_reduction(p, x, m, eps).passed, (p, x, m, eps)

    def test_products_shape(self):
        s1, s2 = sigma_products(Fraction(1, 2), 2, 1, 5)
        assert s1 == s2  # x = 1 - x swaps nothing

    def test_errors(self):
        with pytest.raises(NegativeValuation):
            verify_sigma_reduction(5, Fraction(1, 5), 2, 1)
        with pytest.raises(PreconditionUnmet):
            verify_sigma_reduction(5, 1, 2, 1)


class TestConvolutionSums:
    def test_cubic_examples(self):
        r = verify_cubic_sums(7, CubicCase.GENERIC, 2)
        assert r.passed and r.modulus == 49
        r = verify_cubic_sums(7, CubicCase.QUARTER)
        assert r.passed and r.lhs.value == 49 and r.modulus == 343
        r = verify_cubic_sums(5, CubicCase.HALF)
        assert r.passed and r.lhs.is_zero and r.modulus == 125

    def test_cubic_lhs_from_definition(self):
        assert verify_cubic_sums(7, CubicCase.QUARTER).lhs.value == residue(conv_sum(Fraction(1, 4), 3, -1, 7), 7, 3)
        assert verify_cubic_sums(5, CubicCase.HALF).lhs.value == residue(conv_sum(Fraction(1, 2), 3, 1, 5), 5, 3)

    @pytest.mark.parametrize("p", [7, 11, 13])
    def test_one_third(self, p):
        for x in (Fraction(1, 3), Fraction(1, 3) + p, Fraction(1, 3) - p):
            assert verify_cubic_sums(p, CubicCase.ONE_THIRD, x).passed

    def test_cubic_preconditions(self):
        with pytest.raises(PreconditionUnmet, match="3x"):
            verify_cubic_sums(7, CubicCase.GENERIC, 5)   # 3*5 = 1 mod 7
        with pytest.raises(PreconditionUnmet):
            verify_cubic_sums(13, CubicCase.QUARTER)
        with pytest.raises(PreconditionUnmet):
            verify_cubic_sums(17, CubicCase.HALF)
        with pytest.raises(PreconditionUnmet):
            verify_cubic_sums(7, CubicCase.THIRDS_PAIR)
        with pytest.raises(PreconditionUnmet):
            verify_cubic_sums(11, CubicCase.ONE_THIRD, Fraction(1, 2))

    def test_thirds_pair(self):
        for p in (5, 11, 17):
            assert verify_cubic_sums(p, CubicCase.THIRDS_PAIR).passed

    @pytest.mark.parametrize("p,case,k", [(5, PowerCase.SIXTH_M4, 2), (7, PowerCase.HALF_M5, 3),
                                          (11, PowerCase.SIXTH_M6, 2), (7, PowerCase.QUARTER_M4, 2)])
    def test_power_examples(self, p, case, k):
        r = verify_power_sums(p, case)
        assert r.passed and r.lhs.is_zero and r.modulus == p**k

    def test_power_preconditions(self):
        with pytest.raises(PreconditionUnmet):
            verify_power_sums(3, PowerCase.SIXTH_M4)
        with pytest.raises(PreconditionUnmet):
            verify_power_sums(5, PowerCase.HALF_M5)
        with pytest.raises(PreconditionUnmet):
            verify_power_sums(7, PowerCase.SIXTH_M6)


class TestCrossChecks:
    def test_3f2_neg_example(self):
        p = 7
        r = verify_crosscheck(CrossCheck.F32_NEG, p)
        g = gamma_oracle(Fraction(1, 8), p, 3) * gamma_oracle(Fraction(3, 8), p, 3)
        assert r.passed and r.rhs.value == residue(Fraction(3 * 49, 64) * g * g, p, 3)

    def test_3f2_unit_example(self):
        r = verify_crosscheck(CrossCheck.F32_UNIT, 7, Fraction(1, 2))
        assert r.passed
        assert str(r.case_label) == "odd,>=p/3"

    def test_4f3_neg_p2(self):
        r = verify_crosscheck(CrossCheck.F43_NEG_P2, 7, Fraction(1, 2))
        assert r.passed and r.modulus == 49

    def test_6f5_example(self):
        r = verify_crosscheck(CrossCheck.F65_NEG, 7)
        assert r.passed and r.modulus == 7**4
        # at p = 7 the first-power form happens to agree as well
        assert "agree" in r.note

    def test_6f5_needs_fourth_power(self):
        # at p = 11 only Gamma_p(1/4)^4 matches the series
        r = verify_crosscheck(CrossCheck.F65_NEG, 11)
        assert r.passed and "differ" in r.note

    def test_6f5_precondition(self):
        with pytest.raises(PreconditionUnmet):
            verify_crosscheck(CrossCheck.F65_NEG, 13)
        with pytest.raises(PreconditionUnmet):
            verify_crosscheck(CrossCheck.F65_NEG, 3)
