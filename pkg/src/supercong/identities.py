"""Exact binomial/harmonic identities, checked pointwise in the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .sequences import binomial, central_binomial, harmonic, odd_harmonic


@dataclass(frozen=True)
class IdentityResult:
    id: str
    params: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class IdentityCheck:
    """A claimed equality ``lhs(*params) == rhs(*params)``.

    ``domain(bound)`` enumerates the parameter tuples tested up to ``bound``.
    """

    id: str
    description: str
    domain: Callable[[int], Iterable[tuple[int, ...]]]
    lhs: Callable[..., Fraction]
    rhs: Callable[..., Fraction]

    def check(self, *params: int) -> IdentityResult:
        return IdentityResult(self.id, params, Fraction(self.lhs(*params)), Fraction(self.rhs(*params)))


def _lhs_2_3(n: int) -> Fraction:
    return sum(
        (
            Fraction(binomial(n, k) * binomial(n + k, k) * (-1) ** k, 2 * k + 1) * harmonic(k)
            for k in range(n)
        ),
        Fraction(0),
    )


def _rhs_2_3(n: int) -> Fraction:
    alternating = sum((Fraction((-1) ** k, k) for k in range(1, n + 1)), Fraction(0))
    return (
        -harmonic(n) * central_binomial(n) * (-1) ** n / (2 * n + 1)
        + Fraction(2, 2 * n + 1) * alternating
    )


def _lhs_2_4(n: int) -> Fraction:
    return sum(
        (Fraction(binomial(n, k) * central_binomial(k), (2 * k + 1) * (-4) ** k) for k in range(n)),
        Fraction(0),
    )


def _rhs_2_4(n: int) -> Fraction:
    c = central_binomial(n)
    squares = sum((Fraction(central_binomial(k) ** 2, 16**k) for k in range(n + 1)), Fraction(0))
    return -Fraction(c, (2 * n + 1) * (-4) ** n) + Fraction(4**n, (2 * n + 1) * c) * squares


def _lhs_binom_half(n: int) -> Fraction:
    return Fraction(sum(binomial(n + k, k) << (n - k) for k in range(n + 1)), 2**n)


def _lhs_hockey(big_n: int, m: int) -> Fraction:
    return Fraction(sum(binomial(k, m) for k in range(m, big_n + 1)))


def _lhs_h2k(k: int) -> Fraction:
    return harmonic(2 * k)


def _rhs_h2k(k: int) -> Fraction:
    return harmonic(k) / 2 + odd_harmonic(k)


def _hockey_domain(bound: int):
    return ((big_n, m) for big_n in range(bound + 1) for m in range(big_n + 1))


IDENTITY_2_3 = IdentityCheck(
    "I-2-3",
    "harmonic-weighted sum of C(n,k)C(n+k,k)(-1)^k/(2k+1)",
    lambda b: ((n,) for n in range(1, b + 1)),
    _lhs_2_3,
    _rhs_2_3,
)
IDENTITY_2_4 = IdentityCheck(
    "I-2-4",
    "sum of C(n,k)C(2k,k)/((2k+1)(-4)^k)",
    lambda b: ((n,) for n in range(1, b + 1)),
    _lhs_2_4,
    _rhs_2_4,
)
IDENTITY_BINOM_HALF = IdentityCheck(
    "I-BINOM-HALF",
    "sum_{k<=n} C(n+k,k)/2^k = 2^n",
    lambda b: ((n,) for n in range(b + 1)),
    _lhs_binom_half,
    lambda n: Fraction(2**n),
)
IDENTITY_HOCKEY_STICK = IdentityCheck(
    "I-HOCKEY",
    "sum_{k=m}^{N} C(k,m) = C(N+1,m+1)",
    _hockey_domain,
    _lhs_hockey,
    lambda big_n, m: Fraction(binomial(big_n + 1, m + 1)),
)
IDENTITY_H2K_SPLIT = IdentityCheck(
    "I-H2K-SPLIT",
    "H_2k = H_k/2 + sum_{j<=k} 1/(2j-1)",
    lambda b: ((k,) for k in range(b + 1)),
    _lhs_h2k,
    _rhs_h2k,
)

IDENTITIES: tuple[IdentityCheck, ...] = (
    IDENTITY_2_3,
    IDENTITY_2_4,
    IDENTITY_BINOM_HALF,
    IDENTITY_HOCKEY_STICK,
    IDENTITY_H2K_SPLIT,
)


def identity_2_3(n: int) -> IdentityResult:
    if n < 1:
        raise ValueError("n must be positive")
    return IDENTITY_2_3.check(n)


def identity_2_4(n: int) -> IdentityResult:
    if n < 1:
        raise ValueError("n must be positive")
    return IDENTITY_2_4.check(n)


def identity_binom_half(n: int) -> IdentityResult:
    if n < 0:
        raise ValueError("n must be non-negative")
    return IDENTITY_BINOM_HALF.check(n)


def identity_hockey_stick(big_n: int, m: int) -> IdentityResult:
    if not 0 <= m <= big_n:
        raise ValueError("need 0 <= m <= N")
    return IDENTITY_HOCKEY_STICK.check(big_n, m)


def identity_h2k_split(k: int) -> IdentityResult:
    if k < 0:
        raise ValueError("k must be non-negative")
    return IDENTITY_H2K_SPLIT.check(k)


@dataclass
class IdentityOutcome:
    id: str
    tested: int = 0
    counterexample: IdentityResult | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclass
class IdentitySummary:
    bound: int
    hockey_bound: int
    outcomes: list[IdentityOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)


def run_identities(
    bound: int,
    *,
    hockey_bound: int | None = None,
    checks: Iterable[IdentityCheck] = IDENTITIES,
) -> IdentitySummary:
    """Run each identity over its domain; stops an identity at its first failure.

    The hockey-stick identity has a two-parameter domain, so it defaults
    to ``N <= min(bound, 100)``.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if hockey_bound is None:
        hockey_bound = min(bound, 100)
    summary = IdentitySummary(bound, hockey_bound)
    for ident in checks:
        outcome = IdentityOutcome(ident.id)
        limit = hockey_bound if ident is IDENTITY_HOCKEY_STICK else bound
        for params in ident.domain(limit):
            result = ident.check(*params)
            outcome.tested += 1
            if not result.passed:
                outcome.counterexample = result
                break
        summary.outcomes.append(outcome)
    return summary
