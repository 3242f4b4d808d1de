"""Catalog of every runnable check: what it verifies, at which modulus, over
which parameter grid, and how to run one case.

Case generators take a prime (or None for checks that do not depend on one)
and a grid object carrying the sweep's parameter overrides; any attribute left
as None falls back to the defaults below.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from . import congruences as cg
from . import identities as ids
from .arith import legendre
from .errors import NegativeValuation, PoleEncountered, PreconditionUnmet, UnitRequired
from .results import CheckResult, Verdict

GROUPS = ("theorems", "conjectures", "crosschecks", "identities")

DEFAULT_X = tuple(Fraction(v) for v in ("1/2", "1/3", "2/3", "1/4", "2", "5"))
DEFAULT_SIGMA_M = (1, 2, 3, 4)
DEFAULT_EPS = (1, -1)
DEFAULT_INT_N = tuple(range(1, 7))
DEFAULT_INT_M = (1, 2, 3)
DEFAULT_INT_L = (1, 2, 3)


def default_alpha_grid(p: int) -> list[Fraction]:
    """Reduced a/b with 1 <= a < b <= 10 and p not dividing b, then -(p-1)..-1, then 1 and 2."""
    fracs = sorted({Fraction(a, b) for b in range(2, 11) for a in range(1, b) if b % p})
    return fracs + [Fraction(-j) for j in range(p - 1, 0, -1)] + [Fraction(1), Fraction(2)]


@dataclass(frozen=True)
class CheckEntry:
    id: str
    group: str
    description: str
    exponent: int | None          # compared modulo p^exponent; None for exact identities
    schema: tuple
    cases: Callable[[int | None, object], Iterable[dict]]
    run: Callable[[int | None, dict, int | None], CheckResult]
    prime_indexed: bool = True
    adjustable: bool = False      # accepts a precision override above `exponent`
    modulus_text: str | None = None

    @property
    def modulus_label(self) -> str:
        if self.modulus_text:
            return self.modulus_text
        return "exact" if self.exponent is None else f"p^{self.exponent}"

    def catalog_line(self) -> str:
        schema = ",".join(self.schema) or "-"
        return f"{self.id:<18} {self.group:<12} {self.modulus_label:<6} params[{schema}]  {self.description}"


def _grid(cfg, name, default):
    value = getattr(cfg, name, None) if cfg is not None else None
    return default if value is None else value


def _alpha_cases(p, cfg):
    for a in _grid(cfg, "alpha", None) or default_alpha_grid(p):
        yield {"alpha": Fraction(a)}


def _single(p, cfg):
    yield {}


def _sigma_cases(p, cfg):
    for m in _grid(cfg, "m", DEFAULT_SIGMA_M):
        for eps in _grid(cfg, "eps", DEFAULT_EPS):
            for x in _grid(cfg, "x", DEFAULT_X):
                yield {"x": Fraction(x), "m": m, "eps": eps}


def _generic_x_cases(p, cfg):
    xs = _grid(cfg, "x", None)
    for x in (xs if xs is not None else range(p)):
        yield {"x": Fraction(x)}


def one_third_representatives(p: int) -> list[Fraction]:
    """Values congruent to 1/3 mod p, including (1 +- p (p|3)) / 3 and 1/3 +- p."""
    if p == 3:
        return []
    t = Fraction(1, 3)
    e = legendre(p, 3)
    return [t, Fraction(1 + p * e, 3), Fraction(1 - p * e, 3), t + p, t - p]


def _one_third_cases(p, cfg):
    if p == 3:
        yield {"x": Fraction(1, 3)}
        return
    for x in one_third_representatives(p):
        yield {"x": x}


def _int_valued_cases(p, cfg):
    for variant in ids.IntVariant:
        ns = _grid(cfg, "n", DEFAULT_INT_N)
        ls = _grid(cfg, "l", DEFAULT_INT_L)
        if variant is ids.IntVariant.M2_SQUARED:
            for n in ns:
                for l in ls:
                    yield {"n": n, "m": 2, "l": l, "eps": 1, "variant": variant.value}
            continue
        for n in ns:
            for m in _grid(cfg, "int_m", DEFAULT_INT_M):
                for l in ls:
                    for eps in _grid(cfg, "eps", DEFAULT_EPS):
                        yield {"n": n, "m": m, "l": l, "eps": eps, "variant": variant.value}


def _guo_cases(p, cfg):
    for k in range(13):
        for i in range(9):
            for j in range(9):
                yield {"i": i, "j": j, "k": k}


def _sj2j_cases(p, cfg):
    for j in range(41):
        yield {"j": j}


def _partial_sum_cases(p, cfg):
    for n in range(1, 41):
        for s in range(n):
            yield {"n": n, "s": s}


def _terminating_alphas() -> Iterator[Fraction]:
    seen = set()
    for d in range(1, 9):
        for c in range(-2 * d, 2 * d + 1):
            a = Fraction(c, d)
            if c and a not in seen:
                seen.add(a)
                yield a


def _terminating_cases(p, cfg):
    for a in _terminating_alphas():
        for m1 in range(5):
            for m2 in range(5):
                yield {"alpha": a, "m1": m1, "m2": m2}


def karlsson_minton_cases(count: int = 50, seed: int = 0, max_n: int = 12) -> list[dict]:
    """Random terminating instances with -a > sum(m); lower parameters avoid the poles."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, 3)
        m = [rng.randint(0, 3) for _ in range(r)]
        if sum(m) >= max_n:
            continue
        big_n = rng.randint(sum(m) + 1, max_n)
        b = []
        for _ in range(r):
            if rng.random() < 0.3:
                b.append(Fraction(rng.randint(1, 6)))
            else:
                den = rng.randint(2, 7)
                num = rng.randint(-3 * den, 3 * den)
                while num % den == 0:
                    num += 1
                b.append(Fraction(num, den))
        out.append({"a": -big_n, "b": tuple(b), "m": tuple(m)})
    return out


def _km_cases(p, cfg):
    yield from karlsson_minton_cases(_grid(cfg, "km_cases", 50), _grid(cfg, "seed", 0))


def _with_k(fn):
    return lambda p, params, k: fn(p, k=k, **params)


def _plain(fn):
    return lambda p, params, k: fn(p, **params)


def _cubic(case):
    return lambda p, params, k: cg.verify_cubic_sums(p, case, params.get("x"))


def _power(case):
    return lambda p, params, k: cg.verify_power_sums(p, case)


def _cross(kind):
    return lambda p, params, k: cg.verify_crosscheck(kind, p, params.get("alpha"))


def _identity(identity, with_p=False):
    def run(p, params, k):
        if with_p:
            return ids.IdentityCase(identity, {"p": p}).run()
        return ids.IdentityCase(identity, params).run()
    return run


def _build() -> dict[str, CheckEntry]:
    C, P, X = cg.CubicCase, cg.PowerCase, cg.CrossCheck
    I = ids.IdentityId
    entries = [
        CheckEntry("apery", "theorems", "sum of Apery numbers A_0..A_{p-1} vs 4x^2-2p (p=x^2+2y^2) or 0",
                   2, (), _single, _with_k(cg.verify_apery), adjustable=True),
        CheckEntry("apery_gamma", "theorems", "sum of Apery numbers vs -(-1|p) Gamma_p(1/8)^2 Gamma_p(3/8)^2 or 0",
                   2, (), _single, _with_k(cg.verify_apery_gamma), adjustable=True),
        CheckEntry("apery_triangle", "theorems", "4x^2-2p vs the Gamma_p(1/8), Gamma_p(3/8) form, p=1,3 mod 8",
                   2, (), _single, _plain(cg.verify_apery_triangle)),
        CheckEntry("apery_3f2", "theorems", "sum of Apery numbers vs 3F2[1/2,1/4,3/4;1,1|1]_{p-1}, p=1,3 mod 8",
                   2, (), _single, _plain(cg.verify_apery_3f2)),
        CheckEntry("4f3_unit", "theorems", "well-poised 4F3(alpha) at 1 vs the four-case h_p(alpha) formula",
                   3, ("alpha",), _alpha_cases, _with_k(cg.verify_4f3_unit), adjustable=True),
        CheckEntry("4f3_neg", "theorems", "well-poised 4F3(alpha) at -1 vs (alpha+<-alpha>_p)/(G(1+a)G(1-a))",
                   3, ("alpha",), _alpha_cases, _with_k(cg.verify_4f3_neg), adjustable=True),
        CheckEntry("sigma", "theorems", "binomial convolution sum vs (1-x) S1 + x S2, modulo p^m",
                   None, ("x", "m", "eps"), _sigma_cases, _plain(cg.verify_sigma_reduction),
                   modulus_text="p^m"),
        CheckEntry(C.GENERIC.value, "conjectures", "cubic sum, eps=-1, 3x != 1,2 mod p, is 0 mod p^2",
                   2, ("x",), _generic_x_cases, _cubic(C.GENERIC)),
        CheckEntry(C.ONE_THIRD.value, "conjectures", "cubic sum, eps=-1, x = 1/3 mod p, is x+(p(p|3)-1)/3 mod p^2",
                   2, ("x",), _one_third_cases, _cubic(C.ONE_THIRD)),
        CheckEntry(C.QUARTER.value, "conjectures", "cubic sum, eps=-1, x=1/4, p != 5 mod 8, is p^2 mod p^3",
                   3, (), _single, _cubic(C.QUARTER)),
        CheckEntry(C.HALF.value, "conjectures", "cubic sum, eps=+1, x=1/2, p=5,7 mod 8, is 0 mod p^3",
                   3, (), _single, _cubic(C.HALF)),
        CheckEntry(C.THIRDS_PAIR.value, "conjectures", "cubic sum, eps=+1, x=1/3, p=2 mod 3, is 0 mod p^3",
                   3, (), _single, _cubic(C.THIRDS_PAIR)),
        CheckEntry(P.SIXTH_M4.value, "conjectures", "fourth powers at x=1/6, p>3, 0 mod p^2",
                   2, (), _single, _power(P.SIXTH_M4)),
        CheckEntry(P.QUARTER_M4.value, "conjectures", "fourth powers at x=1/4, p=3 mod 4, 0 mod p^2",
                   2, (), _single, _power(P.QUARTER_M4)),
        CheckEntry(P.HALF_M5.value, "conjectures", "fifth powers at x=1/2, p=3 mod 4, 0 mod p^3",
                   3, (), _single, _power(P.HALF_M5)),
        CheckEntry(P.SIXTH_M6.value, "conjectures", "sixth powers at x=1/6, p=5 mod 6, 0 mod p^2",
                   2, (), _single, _power(P.SIXTH_M6)),
        CheckEntry(X.F32_UNIT.value, "crosschecks", "3F2[a,a,a;1,1|1]_{p-1} vs the four-case g_p(alpha) formula",
                   3, ("alpha",), _alpha_cases, _cross(X.F32_UNIT)),
        CheckEntry(X.F32_NEG.value, "crosschecks", "3F2[1/2,1/2,1/2;1,1|-1]_{p-1} vs Gamma_p(1/8)^2 Gamma_p(3/8)^2 forms",
                   3, (), _single, _cross(X.F32_NEG)),
        CheckEntry(X.F43_NEG_P2.value, "crosschecks", "well-poised 4F3(alpha) at -1, the mod p^2 form",
                   2, ("alpha",), _alpha_cases, _cross(X.F43_NEG_P2)),
        CheckEntry(X.F65_NEG.value, "crosschecks", "6F5[1/2,5/4,1/2^4;1/4,1^4|-1]_{p-1} vs -p^3 Gamma_p(1/4)^4/16",
                   4, (), _single, _cross(X.F65_NEG)),
        CheckEntry(I.GUO.value, "identities", "product of four binomials as a sum over s (i,j<=8, k<=12)",
                   None, ("i", "j", "k"), _guo_cases, _identity(I.GUO), prime_indexed=False),
        CheckEntry(I.SJ2J.value, "identities", "alternating sum C(s,j)^2 C(2j,s)/(2s+1) in closed form (j<=40)",
                   None, ("j",), _sj2j_cases, _identity(I.SJ2J), prime_indexed=False),
        CheckEntry(I.PARTIAL_SUM.value, "identities", "partial sums of C(k+s,s)C(k,s) in closed form (n<=40)",
                   None, ("n", "s"), _partial_sum_cases, _identity(I.PARTIAL_SUM), prime_indexed=False),
        CheckEntry(I.BINOM_P_CONG.value, "identities", "C(p+s,s)C(p-1,s) = (-1)^s mod p^2 for all s < p",
                   2, (), _single, _identity(I.BINOM_P_CONG, with_p=True)),
        CheckEntry(I.KARLSSON_MINTON.value, "identities", "terminating Karlsson-Minton sums vanish (seeded random)",
                   None, ("a", "b", "m"), _km_cases, _identity(I.KARLSSON_MINTON), prime_indexed=False),
        CheckEntry(I.F43_UNIT_TERM.value, "identities", "terminating well-poised 4F3 at 1 vs Pochhammer quotient",
                   None, ("alpha", "m1", "m2"), _terminating_cases, _identity(I.F43_UNIT_TERM), prime_indexed=False),
        CheckEntry(I.WHIPPLE_TERM.value, "identities", "terminating well-poised 4F3 at -1 vs Pochhammer quotient",
                   None, ("alpha", "m1", "m2"), _terminating_cases, _identity(I.WHIPPLE_TERM), prime_indexed=False),
        CheckEntry(I.INT_VALUED.value, "identities", "normalized convolution polynomials are integer-valued",
                   None, ("n", "m", "l", "eps", "variant"), _int_valued_cases, _identity(I.INT_VALUED),
                   prime_indexed=False),
    ]
    return {e.id: e for e in entries}


CHECKS: dict[str, CheckEntry] = _build()
ORDER = {cid: i for i, cid in enumerate(CHECKS)}


def list_checks() -> list[CheckEntry]:
    return list(CHECKS.values())


def resolve(names: Iterable[str]) -> list[str]:
    """Expand group aliases ('all', 'theorems', ...) into check ids, keeping catalog order."""
    chosen = set()
    for name in names:
        name = name.strip()
        if not name:
            continue
        if name == "all":
            chosen.update(CHECKS)
        elif name in GROUPS:
            chosen.update(c for c, e in CHECKS.items() if e.group == name)
        elif name in CHECKS:
            chosen.add(name)
        else:
            raise KeyError(name)
    return sorted(chosen, key=ORDER.__getitem__)


UNMET = (PreconditionUnmet, UnitRequired, NegativeValuation, PoleEncountered)


def run_case(check: str, p: int | None, params: dict, k: int | None = None) -> CheckResult:
    """Run one case; precondition violations become a precondition-unmet record."""
    entry = CHECKS[check]
    try:
        return entry.run(p, params, k if k is not None else entry.exponent)
    except UNMET as exc:
        return CheckResult(check, p, params, None, None, None, Verdict.PRECONDITION_UNMET, None,
                           f"{type(exc).__name__}: {exc}")
