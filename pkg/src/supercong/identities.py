"""Exact checks of finite binomial identities and terminating hypergeometric identities.

Everything here is evaluated in exact rational arithmetic; a check passes only
on exact equality.  Gamma quotients are only accepted when their argument gaps
are integers, in which case they are finite Pochhammer products.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from .arith import RationalLike, as_rational
from .errors import DenominatorZero, PoleEncountered, PreconditionUnmet
from .hyper import HyperSpec, binomial_double_sum, pochhammer, truncated_hyper, well_poised
from .results import CheckResult, Verdict, exact_result


class IdentityId(str, enum.Enum):
    GUO = "guo"
    SJ2J = "sj2j"
    PARTIAL_SUM = "partial_sum"
    KARLSSON_MINTON = "karlsson_minton"
    F43_UNIT_TERM = "f43_term"
    WHIPPLE_TERM = "whipple_term"
    BINOM_P_CONG = "binom_p"
    INT_VALUED = "int_valued"


class IntVariant(str, enum.Enum):
    GENERAL = "general"
    M2_SQUARED = "m2_squared"


def check_guo(i: int, j: int, k: int) -> CheckResult:
    """C(k,i)C(k+i,i)C(k,j)C(k+j,j) against its expansion over s in [max(i,j), i+j]."""
    lhs = comb(k, i) * comb(k + i, i) * comb(k, j) * comb(k + j, j)
    rhs = sum(
        comb(s, i) * comb(s, j) * comb(i + j, s) * comb(k, s) * comb(k + s, s)
        for s in range(max(i, j), i + j + 1)
    )
    return exact_result(IdentityId.GUO.value, {"i": i, "j": j, "k": k}, lhs, rhs)


def check_sj2j(j: int) -> CheckResult:
    lhs = sum(Fraction(comb(s, j) ** 2 * comb(2 * j, s) * (-1) ** s, 2 * s + 1) for s in range(j, 2 * j + 1))
    rhs = Fraction(comb(2 * j, j) ** 2, (4 * j + 1) * comb(4 * j, 2 * j))
    return exact_result(IdentityId.SJ2J.value, {"j": j}, lhs, rhs)


def check_partial_sum(n: int, s: int) -> CheckResult:
    """sum_{k=s}^{n-1} C(k+s,s)C(k,s) == n/(2s+1) C(n+s,s) C(n-1,s)."""
    if n < 1 or not 0 <= s <= n - 1:
        raise ValueError(f"need 0 <= s <= n-1, got n={n}, s={s}")
    lhs = sum(comb(k + s, s) * comb(k, s) for k in range(s, n))
    rhs = Fraction(n, 2 * s + 1) * comb(n + s, s) * comb(n - 1, s)
    return exact_result(IdentityId.PARTIAL_SUM.value, {"n": n, "s": s}, lhs, rhs)


def check_binom_p_congruence(p: int) -> CheckResult:
    """C(p+s,s) C(p-1,s) == (-1)^s (mod p^2) for every s in [0, p-1]."""
    m = p * p
    bad = [s for s in range(p) if (comb(p + s, s) * comb(p - 1, s) - (-1) ** s) % m]
    s = bad[0] if bad else p - 1
    lhs = comb(p + s, s) * comb(p - 1, s) % m
    rhs = (-1) ** s % m
    note = f"first failing s={s}" if bad else f"all s in [0,{p - 1}] agree"
    verdict = Verdict.FAIL if bad else Verdict.PASS
    return CheckResult(IdentityId.BINOM_P_CONG.value, p, {"s": s}, m, lhs, rhs, verdict, None, note)


def check_karlsson_minton(a: int, b: Sequence[RationalLike], m: Sequence[int]) -> CheckResult:
    """Terminating sum with upper (a, b_i + m_i), lower (b_i), unit argument, must vanish."""
    b = [as_rational(x) for x in b]
    m = list(m)
    if len(b) != len(m) or any(mi < 0 for mi in m):
        raise ValueError("b and m must have equal length and m_i >= 0")
    if a > 0 or int(a) != a:
        raise ValueError(f"a must be a nonpositive integer, got {a}")
    big_n = -a
    spec = HyperSpec([a] + [bi + mi for bi, mi in zip(b, m)], b, 1, big_n)
    params = {"a": a, "b": ",".join(map(str, b)), "m": ",".join(map(str, m))}
    for bi in b:
        if bi.denominator == 1 and -big_n <= bi <= 0:
            raise PreconditionUnmet(f"lower parameter {bi} vanishes inside the terminating range")
    if big_n <= sum(m):
        value = truncated_hyper(spec)
        raise PreconditionUnmet(f"-a={big_n} <= sum(m)={sum(m)}; terminating sum is {value}")
    return exact_result(IdentityId.KARLSSON_MINTON.value, params, truncated_hyper(spec), Fraction(0))


def _pochhammer_ratio(num: list[tuple], den: list[tuple]) -> Fraction:
    top = prod((pochhammer(a, n) for a, n in num), start=Fraction(1))
    bottom = prod((pochhammer(a, n) for a, n in den), start=Fraction(1))
    if top == 0 or bottom == 0:
        for a, n in num + den:
            if pochhammer(a, n) == 0:
                raise PoleEncountered(f"({a})_{n}")
    return top / bottom


def _terminating_lhs(alpha, m1, m2, argument):
    spec = well_poised(alpha, [-m1, -m2], [1 + alpha + m1, 1 + alpha + m2], argument, m1 + m2)
    if alpha == 0:
        raise PoleEncountered("alpha/2 = 0")
    try:
        return truncated_hyper(spec)
    except DenominatorZero as exc:
        raise PoleEncountered(f"({exc.parameter})_{exc.k}") from exc


def check_f43_unit_terminating(alpha: RationalLike, m1: int, m2: int) -> CheckResult:
    """Very-well-poised 4F3 at unit argument with beta=-m1, gamma=-m2.

    The Gamma quotient on the right becomes
    (1+a)_{m1} ((1+a)/2 + m1)_{m2} / ((1+a+m2)_{m1} ((1+a)/2)_{m2}).
    """
    alpha = as_rational(alpha)
    lhs = _terminating_lhs(alpha, m1, m2, 1)
    half = (1 + alpha) / 2
    rhs = _pochhammer_ratio([(1 + alpha, m1), (half + m1, m2)], [(1 + alpha + m2, m1), (half, m2)])
    return exact_result(IdentityId.F43_UNIT_TERM.value, {"alpha": alpha, "m1": m1, "m2": m2}, lhs, rhs)


def check_whipple_terminating(alpha: RationalLike, m1: int, m2: int) -> CheckResult:
    """The same series at argument -1; right side (1+a)_{m1} / (1+a+m2)_{m1}."""
    alpha = as_rational(alpha)
    lhs = _terminating_lhs(alpha, m1, m2, -1)
    rhs = _pochhammer_ratio([(1 + alpha, m1)], [(1 + alpha + m2, m1)])
    return exact_result(IdentityId.WHIPPLE_TERM.value, {"alpha": alpha, "m1": m1, "m2": m2}, lhs, rhs)


def _double_factorial_odd(n: int) -> int:
    return prod(range(1, n + 1, 2), start=1)


def conjectured_polynomial(x: RationalLike, n: int, m: int, l: int, eps: int,
                           variant: IntVariant = IntVariant.GENERAL) -> Fraction:
    """Evaluate the normalized binomial double-sum polynomial at x."""
    variant = IntVariant(variant)
    if variant is IntVariant.M2_SQUARED:
        if m != 2 or eps != 1:
            raise ValueError("the squared variant needs m=2 and eps=+1")
        return Fraction(_double_factorial_odd(2 * l - 1), n * n) * binomial_double_sum(x, 2, 1, n, 2 * l - 1)
    return binomial_double_sum(x, m, eps, n, 2 * l - 1) / n


@dataclass
class IntegerValuedCertificate:
    """Values at 0..D+2 and the leading entries of their difference table.

    ``diffs[i]`` is the i-th forward difference at 0, i.e. the coefficient of
    C(x, i) in the binomial basis.  Integrality of all of them for i <= degree
    is equivalent to integer-valuedness.
    """

    degree_bound: int
    values: list = field(default_factory=list)
    diffs: list = field(default_factory=list)

    @property
    def degree_ok(self) -> bool:
        return all(d == 0 for d in self.diffs[self.degree_bound + 1:])

    @property
    def integral(self) -> bool:
        return all(d.denominator == 1 for d in self.diffs)


def integer_valued_certificate(n: int, m: int, l: int, eps: int,
                               variant: IntVariant = IntVariant.GENERAL, slack: int = 2) -> IntegerValuedCertificate:
    if n < 1 or m < 1 or l < 1 or eps not in (1, -1):
        raise ValueError("need n, m, l >= 1 and eps = +-1")
    bound = m * (n - 1)
    values = [conjectured_polynomial(x, n, m, l, eps, variant) for x in range(bound + slack + 1)]
    diffs, row = [], values
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return IntegerValuedCertificate(bound, values, diffs)


def check_integer_valued(n: int, m: int, l: int, eps: int,
                         variant: IntVariant = IntVariant.GENERAL) -> CheckResult:
    variant = IntVariant(variant)
    if variant is IntVariant.M2_SQUARED and (m != 2 or eps != 1):
        raise ValueError("the squared variant needs m=2 and eps=+1")
    cert = integer_valued_certificate(n, m, l, eps, variant)
    params = {"n": n, "m": m, "l": l, "eps": eps, "variant": variant.value}
    non_integral = [i for i, d in enumerate(cert.diffs) if d.denominator != 1]
    notes = []
    if not cert.degree_ok:
        notes.append(f"degree exceeds bound {cert.degree_bound} (guard band hit)")
    if non_integral:
        i = non_integral[0]
        notes.append(f"binomial-basis coefficient {i} = {cert.diffs[i]} is not an integer")
        lhs = cert.diffs[i]
    else:
        lhs = cert.values[-1]
    verdict = Verdict.PASS if cert.integral else Verdict.FAIL
    note = "; ".join(notes) or f"integral at x=0..{len(cert.values) - 1}, degree <= {cert.degree_bound}"
    return CheckResult(IdentityId.INT_VALUED.value, None, params, None, lhs, None, verdict, None, note)


@dataclass(frozen=True)
class IdentityCase:
    """A single identity instance; parameters are validated on construction."""

    identity: IdentityId
    parameters: dict

    _RUNNERS = {
        IdentityId.GUO: (check_guo, ("i", "j", "k")),
        IdentityId.SJ2J: (check_sj2j, ("j",)),
        IdentityId.PARTIAL_SUM: (check_partial_sum, ("n", "s")),
        IdentityId.BINOM_P_CONG: (check_binom_p_congruence, ("p",)),
        IdentityId.KARLSSON_MINTON: (check_karlsson_minton, ("a", "b", "m")),
        IdentityId.F43_UNIT_TERM: (check_f43_unit_terminating, ("alpha", "m1", "m2")),
        IdentityId.WHIPPLE_TERM: (check_whipple_terminating, ("alpha", "m1", "m2")),
        IdentityId.INT_VALUED: (check_integer_valued, ("n", "m", "l", "eps", "variant")),
    }

    def __post_init__(self):
        object.__setattr__(self, "identity", IdentityId(self.identity))
        _, names = self._RUNNERS[self.identity]
        missing = [n for n in names if n not in self.parameters]
        if missing:
            raise ValueError(f"{self.identity.value} needs parameters {missing}")
        for name in ("i", "j", "k", "n", "s", "m1", "m2", "l"):
            if name in self.parameters and int(self.parameters[name]) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def run(self) -> CheckResult:
        fn, names = self._RUNNERS[self.identity]
        return fn(*(self.parameters[n] for n in names))
