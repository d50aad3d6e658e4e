"""Registry of congruences mod prime powers and the verifier that checks them.

Each side of a congruence is evaluated as an exact rational and only then
reduced mod p^e. A check may expand into several instances for one prime
(e.g. "for every k <= (p-1)/2"); the report for (check, p) describes the
instance with the smallest valuation margin.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .arith import (
    ArithmeticDomainError,
    DenominatorDivisibleByP,
    PrimePowerModulus,
    is_prime,
    padic_valuation,
    reduce,
)
from .sequences import (
    SequenceCache,
    bernoulli,
    binomial,
    central_binomial,
    clf,
    euler_number,
    fermat_quotient_two,
    harmonic,
    legendre_minus_one,
    odd_harmonic,
    primes_up_to,
    set_default_cache,
)

log = logging.getLogger(__name__)

VALUATION_SLACK = 3


class NotApplicable(ValueError):
    pass


class UnknownCheck(KeyError):
    pass


@dataclass(frozen=True)
class Instance:
    label: str
    lhs: Fraction
    rhs: Fraction
    exponent: int


@dataclass(frozen=True)
class CongruenceCheck:
    """``lhs(p) == rhs(p) (mod p**exponent)`` for every prime with ``applicable(p)``.

    Checks quantified over an index supply ``family`` instead of lhs/rhs;
    each yielded :class:`Instance` carries its own exponent.
    """

    id: str
    description: str
    exponent: int
    applicable: Callable[[int], bool]
    lhs: Callable[[int], Fraction] | None = None
    rhs: Callable[[int], Fraction] | None = None
    family: Callable[[int], Iterable[Instance]] | None = None
    rhs_shift: int | None = None

    def instances(self, p: int) -> list[Instance]:
        if self.family is not None:
            found = [Instance(i.label, Fraction(i.lhs), Fraction(i.rhs), i.exponent) for i in self.family(p)]
        else:
            found = [Instance("", Fraction(self.lhs(p)), Fraction(self.rhs(p)), self.exponent)]
        if self.rhs_shift is not None:
            found = [replace(i, rhs=i.rhs + p ** (i.exponent + self.rhs_shift)) for i in found]
        return found


def with_rhs_shift(check: CongruenceCheck, offset: int) -> CongruenceCheck:
    """Copy of ``check`` whose right side gains ``p**(e + offset)`` per instance."""
    return replace(check, rhs_shift=offset, id=f"{check.id}{offset:+d}")


@dataclass(frozen=True)
class VerificationReport:
    check: str
    p: int
    exponent: int
    lhs: int | None
    rhs: int | None
    valuation: int | None
    capped: bool
    passed: bool
    instance: str = ""
    elapsed: float = 0.0
    error: str | None = None

    @property
    def valuation_text(self) -> str:
        if self.valuation is None:
            return ""
        return f">={self.valuation}" if self.capped else str(self.valuation)


def _odd_prime(p: int) -> bool:
    return p > 2 and is_prime(p)


def _prime_above_3(p: int) -> bool:
    return p > 3 and is_prime(p)


def _sum(terms) -> Fraction:
    return sum(terms, Fraction(0))


def _sign(p: int) -> int:
    # (-1)^((p-1)/2), which is also the Legendre symbol (-1/p)
    return legendre_minus_one(p)


# -- sides of the registered congruences ----------------------------------


def _sq16(k: int) -> Fraction:
    return Fraction(central_binomial(k) ** 2, 16**k)


def lhs_1_1(p):
    return _sum(_sq16(k) / (2 * k + 1) for k in range((p - 1) // 2))


def rhs_1_1(p):
    q = fermat_quotient_two(p)
    return -2 * q - p * q * q + Fraction(5, 12) * p * p * bernoulli(p - 3)


def lhs_1_2(p):
    return _sum(_sq16(k) for k in range((p - 1) // 2 + 1))


def rhs_1_2(p):
    return _sign(p) + p * p * euler_number(p - 3)


def lhs_1_3(p):
    return _sum(_sq16(k) * harmonic(k) / (2 * k + 1) for k in range((p - 1) // 2))


def rhs_1_3(p):
    q = fermat_quotient_two(p)
    return (
        4 * q * q
        + 2 * legendre_minus_one(p) * (euler_number(2 * p - 4) - 2 * euler_number(p - 3))
        + Fraction(7, 12) * p * bernoulli(p - 3)
    )


def lhs_1_4(p):
    return _sum(_sq16(k) * harmonic(2 * k) / (2 * k + 1) for k in range((p - 1) // 2))


def rhs_1_4(p):
    return Fraction(-2 * legendre_minus_one(p) * euler_number(p - 3))


def lhs_remark(p):
    return _sum(_sq16(k) * harmonic(2 * k) / k for k in range(1, (p - 1) // 2 + 1))


def rhs_remark(p):
    return Fraction(4 * legendre_minus_one(p) * euler_number(p - 3))


def _clf_weighted(p: int, base: int) -> Fraction:
    top = p - 1
    return Fraction(sum(clf(k) * base ** (top - k) for k in range(p)), base**top)


def lhs_1_5(p):
    return _clf_weighted(p, 8)


def rhs_1_5(p):
    return Fraction(1 + 2 * legendre_minus_one(p) * p * p * euler_number(p - 3))


def lhs_1_6(p):
    return _clf_weighted(p, 16)


def rhs_1_6(p):
    return Fraction(legendre_minus_one(p) - p * p * euler_number(p - 3))


def _euler_gap(p: int) -> int:
    return euler_number(2 * p - 4) - 2 * euler_number(p - 3)


def lhs_l22_a(p):
    # 1 <= k < p/4
    return _sum(Fraction(1, k) for k in range(1, (p - 1) // 4 + 1))


def rhs_l22_a(p):
    q = fermat_quotient_two(p)
    return (
        -3 * q
        + p * (Fraction(3, 2) * q * q + _sign(p) * _euler_gap(p))
        - p * p * (q**3 + Fraction(7, 12) * bernoulli(p - 3))
    )


def lhs_l22_b(p):
    # p/4 < k < p/2
    return _sum(Fraction(1, k) for k in range((p - 1) // 4 + 1, (p - 1) // 2 + 1))


def rhs_l22_b(p):
    q = fermat_quotient_two(p)
    return q - p * (Fraction(1, 2) * q * q + _sign(p) * _euler_gap(p)) + Fraction(1, 3) * p * p * q**3


def lhs_morley(p):
    return Fraction(binomial(p - 1, (p - 1) // 2))


def rhs_morley(p):
    return Fraction(_sign(p) * 4 ** (p - 1))


def lhs_2_5(p):
    n = (p - 1) // 2
    return _sum(
        Fraction(binomial(n, k) * central_binomial(k), (2 * k + 1) * (-4) ** k) for k in range(n)
    )


def rhs_2_5(p):
    q = fermat_quotient_two(p)
    return -2 * q + p * q * q + _sign(p) * p * euler_number(p - 3)


def lhs_euler_shift(p):
    return Fraction(euler_number(2 * p - 4))


def rhs_euler_shift(p):
    return Fraction(euler_number(p - 3))


def lhs_16_full(p):
    return _sum(_sq16(k) for k in range(p))


def rhs_16_full(p):
    return Fraction(legendre_minus_one(p) - p * p * euler_number(p - 3))


def lhs_su3_hk(p):
    return _sum(_sq16(k) * harmonic(k) for k in range((p - 1) // 2 + 1))


def rhs_su3_hk(p):
    return 2 * legendre_minus_one(p) * harmonic((p - 1) // 2)


def lhs_su3_h2k(p):
    return _sum(_sq16(k) * harmonic(2 * k) for k in range((p - 1) // 2 + 1))


def rhs_su3_h2k(p):
    return (
        Fraction(3, 2) * legendre_minus_one(p) * harmonic((p - 1) // 2)
        + p * euler_number(p - 3)
    )


def family_2_1(p):
    n = (p - 1) // 2
    for k in range(n + 1):
        yield Instance(
            f"k={k}",
            Fraction(binomial(n, k) * (-4) ** k, central_binomial(k)),
            1 - p * odd_harmonic(k),
            2,
        )


def family_2_2(p):
    n = (p - 1) // 2
    for k in range(n + 1):
        yield Instance(f"k={k}", Fraction(binomial(n, k) * binomial(n + k, k) * (-1) ** k), _sq16(k), 2)


def family_binom_p1(p):
    for j in range((p - 3) // 2 + 1):
        yield Instance(f"j={j}", Fraction(binomial(p - 1, 2 * j)), 1 - p * harmonic(2 * j), 2)


def tail_sum(p: int, k: int) -> Fraction:
    """sum_{n=0}^{p-1-k} C(k,n)(-1/2)^n, written with the reflected binomial C(n-k-1, n)."""
    top = p - 1 - k
    return Fraction(sum(binomial(n - k - 1, n) << (top - n) for n in range(top + 1)), 1 << top)


def family_tail(p):
    for k in range((p - 1) // 2 + 1, p):
        yield Instance(f"k={k} square", Fraction(central_binomial(k) ** 2), Fraction(0), 2)
        yield Instance(f"k={k} tail", tail_sum(p, k), Fraction(2 ** (p - 1 - k)), 1)


def _check(cid, description, exponent, applicable, lhs=None, rhs=None, family=None):
    return CongruenceCheck(cid, description, exponent, applicable, lhs, rhs, family)


REGISTRY: tuple[CongruenceCheck, ...] = (
    _check("C-1-1", "sum C(2k,k)^2/((2k+1)16^k), k<=(p-3)/2", 3, _prime_above_3, lhs_1_1, rhs_1_1),
    _check("C-1-2", "sum C(2k,k)^2/16^k, k<=(p-1)/2", 3, _prime_above_3, lhs_1_2, rhs_1_2),
    _check("C-1-3", "sum C(2k,k)^2 H_k/((2k+1)16^k)", 2, _prime_above_3, lhs_1_3, rhs_1_3),
    _check("C-1-4", "sum C(2k,k)^2 H_2k/((2k+1)16^k)", 1, _prime_above_3, lhs_1_4, rhs_1_4),
    _check("C-REMARK", "sum C(2k,k)^2 H_2k/(k 16^k)", 1, _prime_above_3, lhs_remark, rhs_remark),
    _check("C-1-5", "sum_{k<p} P_k/8^k", 3, _odd_prime, lhs_1_5, rhs_1_5),
    _check("C-1-6", "sum_{k<p} P_k/16^k", 3, _odd_prime, lhs_1_6, rhs_1_6),
    _check("C-2-1", "C(n,k)(-4)^k/C(2k,k) vs 1 - p*O_k, p=2n+1", 2, _odd_prime, family=family_2_1),
    _check("C-2-2", "C(n,k)C(n+k,k)(-1)^k vs C(2k,k)^2/16^k", 2, _odd_prime, family=family_2_2),
    _check("C-L22-A", "sum_{1<=k<p/4} 1/k", 3, _prime_above_3, lhs_l22_a, rhs_l22_a),
    _check("C-L22-B", "sum_{p/4<k<p/2} 1/k", 3, _prime_above_3, lhs_l22_b, rhs_l22_b),
    _check("C-MORLEY", "C(p-1,(p-1)/2) vs (-1)^((p-1)/2) 4^(p-1)", 3, _prime_above_3, lhs_morley, rhs_morley),
    _check("C-2-5", "sum C(n,k)C(2k,k)/((2k+1)(-4)^k), n=(p-1)/2", 2, _prime_above_3, lhs_2_5, rhs_2_5),
    _check("C-EULER-SHIFT", "E_{2p-4} vs E_{p-3}", 1, _prime_above_3, lhs_euler_shift, rhs_euler_shift),
    _check("C-BINOM-P1", "C(p-1,2j) vs 1 - p H_2j", 2, _prime_above_3, family=family_binom_p1),
    _check("C-TAIL", "C(2k,k)^2 = 0 mod p^2 and tail sums, (p-1)/2 < k < p", 2, _odd_prime, family=family_tail),
    _check("C-16-FULL", "sum_{k<p} C(2k,k)^2/16^k", 3, _prime_above_3, lhs_16_full, rhs_16_full),
    _check("C-SU3-HK", "sum C(2k,k)^2 H_k/16^k, k<=(p-1)/2", 2, _prime_above_3, lhs_su3_hk, rhs_su3_hk),
    _check("C-SU3-H2K", "sum C(2k,k)^2 H_2k/16^k, k<=(p-1)/2", 2, _prime_above_3, lhs_su3_h2k, rhs_su3_h2k),
)

CHECKS: dict[str, CongruenceCheck] = {c.id: c for c in REGISTRY}


def get_check(check_id: str) -> CongruenceCheck:
    try:
        return CHECKS[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None


def resolve_checks(ids: Iterable[str] | str) -> list[CongruenceCheck]:
    """Map ids (or ``"all"``) to checks in registry order; unknown ids raise."""
    if isinstance(ids, str):
        ids = REGISTRY if ids == "all" else [ids]
    wanted = [i if isinstance(i, CongruenceCheck) else get_check(i) for i in ids]
    order = {c.id: n for n, c in enumerate(REGISTRY)}
    return sorted(set(wanted), key=lambda c: (order.get(c.id, len(order)), c.id))


def verify(check: CongruenceCheck, p: int) -> VerificationReport:
    if not check.applicable(p):
        raise NotApplicable(f"{check.id} does not apply at p={p}")
    start = time.perf_counter()
    worst = None
    for inst in check.instances(p):
        m = PrimePowerModulus(p, inst.exponent)
        try:
            left, right = reduce(inst.lhs, m), reduce(inst.rhs, m)
        except DenominatorDivisibleByP as exc:
            where = f" [{inst.label}]" if inst.label else ""
            raise DenominatorDivisibleByP(
                exc.value, exc.p, exc.valuation, context=f"{check.id}{where} at p={p}"
            ) from None
        cap = inst.exponent + VALUATION_SLACK
        v = padic_valuation((inst.lhs - inst.rhs).numerator, p, cap=cap)
        margin = v - inst.exponent
        if worst is None or margin < worst[0]:
            worst = (margin, inst, left, right, v, v >= cap)
    margin, inst, left, right, v, capped = worst
    return VerificationReport(
        check=check.id,
        p=p,
        exponent=inst.exponent,
        lhs=left.value,
        rhs=right.value,
        valuation=v,
        capped=capped,
        passed=margin >= 0,
        instance=inst.label,
        elapsed=time.perf_counter() - start,
    )


def _verify_safely(check: CongruenceCheck, p: int) -> VerificationReport:
    try:
        return verify(check, p)
    except (ArithmeticDomainError, ArithmeticError, NotApplicable) as exc:
        log.warning("%s at p=%d: %s", check.id, p, exc)
        return VerificationReport(check.id, p, check.exponent, None, None, None, False, False,
                                  error=f"{type(exc).__name__}: {exc}")


@dataclass
class RangeReport:
    checks: list[str]
    primes: list[int]
    rows: list[VerificationReport] = field(default_factory=list)

    @property
    def failures(self) -> list[VerificationReport]:
        return [r for r in self.rows if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def stronger_than_claimed(self) -> list[VerificationReport]:
        """Rows whose valuation exceeds the claimed exponent."""
        return [r for r in self.rows if r.valuation is not None and r.valuation > r.exponent]

    def summary(self) -> dict:
        return {
            "total": len(self.rows),
            "passed": sum(r.passed for r in self.rows),
            "failed": sum(not r.passed and r.error is None for r in self.rows),
            "errors": sum(r.error is not None for r in self.rows),
        }


_worker_checks: dict[str, CongruenceCheck] = {}


def _init_worker(cache_path, checks):
    set_default_cache(SequenceCache(cache_path))
    _worker_checks.clear()
    _worker_checks.update({c.id: c for c in checks})


def _run_pair(pair):
    check_id, p = pair
    return _verify_safely(_worker_checks[check_id], p)


def _prime_list(primes: int | Sequence[int]) -> list[int]:
    if isinstance(primes, int):
        if primes < 3:
            raise ValueError("prime bound must be at least 3")
        return primes_up_to(primes)
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise ValueError(f"not prime: {bad}")
    return sorted(set(primes))


def verify_range(
    checks: Iterable[str | CongruenceCheck] | str,
    primes: int | Sequence[int],
    *,
    workers: int = 1,
    cache_path: str | os.PathLike | None = None,
) -> RangeReport:
    """Verify every applicable (check, prime) pair.

    ``primes`` is an upper bound or an explicit list. Rows come back in
    (registry order, p) order whatever the worker count.
    """
    selected = resolve_checks(checks)
    plist = _prime_list(primes)
    pairs = [(c, p) for c in selected for p in plist if c.applicable(p)]
    report = RangeReport([c.id for c in selected], plist)
    if workers <= 1 or len(pairs) <= 1:
        report.rows = [_verify_safely(c, p) for c, p in pairs]
        return report
    # expensive primes first keeps the pool busy; results are re-ordered below
    order = sorted(range(len(pairs)), key=lambda i: -pairs[i][1])
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_worker, initargs=(cache_path, selected)
    ) as pool:
        results = list(pool.map(_run_pair, [(pairs[i][0].id, pairs[i][1]) for i in order]))
    rows: list[VerificationReport | None] = [None] * len(pairs)
    for i, r in zip(order, results):
        rows[i] = r
    report.rows = rows
    return report
