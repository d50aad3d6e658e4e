from dataclasses import replace
from fractions import Fraction

import pytest

from supercong.arith import DenominatorDivisibleByP, PrimePowerModulus, reduce
from supercong.congruences import (
    CHECKS,
    REGISTRY,
    CongruenceCheck,
    Instance,
    NotApplicable,
    UnknownCheck,
    lhs_1_1,
    lhs_1_3,
    lhs_1_4,
    lhs_2_5,
    resolve_checks,
    tail_sum,
    verify,
    verify_range,
    with_rhs_shift,
)
from supercong.sequences import binomial, primes_up_to

from .conftest import brute_residue

EXPECTED_IDS = {
    "C-1-1", "C-1-2", "C-1-3", "C-1-4", "C-REMARK", "C-1-5", "C-1-6", "C-2-1", "C-2-2",
    "C-L22-A", "C-L22-B", "C-MORLEY", "C-2-5", "C-EULER-SHIFT", "C-BINOM-P1", "C-TAIL",
    "C-16-FULL", "C-SU3-HK", "C-SU3-H2K",
}


def test_registry_is_complete():
    assert set(CHECKS) == EXPECTED_IDS
    assert len(REGISTRY) == len(EXPECTED_IDS)


def test_c_1_4_at_five():
    r = verify(CHECKS["C-1-4"], 5)
    # k=0 vanishes (H_0 = 0); k=1 gives 4 * (3/2) / (3 * 16)
    assert lhs_1_4(5) == Fraction(1, 8)
    assert r.lhs == r.rhs == 2 == brute_residue(Fraction(1, 8), 5)
    assert r.passed


def test_morley_at_five():
    r = verify(CHECKS["C-MORLEY"], 5)
    assert (r.lhs, r.rhs) == (6, 256 % 125)
    assert 256 - 6 == 2 * 5**3
    assert r.valuation == 3 and r.passed


def test_c_1_5_at_three():
    r = verify(CHECKS["C-1-5"], 3)
    assert r.lhs == r.rhs == 10 == brute_residue(Fraction(13, 4), 27)
    assert r.passed


def test_c_1_6_at_three():
    r = verify(CHECKS["C-1-6"], 3)
    # 1 + 8/16 + 80/256 = 29/16, and rhs = -1 - 9
    assert r.lhs == brute_residue(Fraction(29, 16), 27) == 17 == (-10) % 27


def test_c_1_2_at_five():
    r = verify(CHECKS["C-1-2"], 5)
    assert r.lhs == brute_residue(Fraction(89, 64), 125) == 101 == (-24) % 125
    assert r.passed


def test_l22_b_at_five():
    r = verify(CHECKS["C-L22-B"], 5)
    assert r.lhs == r.rhs == 63 == brute_residue(Fraction(1, 2), 125)


def test_not_applicable():
    with pytest.raises(NotApplicable):
        verify(CHECKS["C-MORLEY"], 3)
    with pytest.raises(NotApplicable):
        verify(CHECKS["C-1-5"], 2)


def test_verify_range_examples():
    rows = verify_range(["C-MORLEY"], 20).rows
    assert [r.p for r in rows] == [5, 7, 11, 13, 17, 19]
    assert all(r.passed for r in rows)
    rows = verify_range(["C-1-2"], 7).rows
    assert [r.p for r in rows] == [5, 7] and all(r.passed for r in rows)
    empty = verify_range([], 100)
    assert empty.rows == [] and empty.passed


def test_verify_range_explicit_prime_list():
    report = verify_range(["C-1-6"], [11, 3, 7])
    assert [r.p for r in report.rows] == [3, 7, 11]
    with pytest.raises(ValueError):
        verify_range(["C-1-6"], [9])


def test_resolve_checks_canonical_order():
    ids = [c.id for c in resolve_checks(["C-TAIL", "C-1-1", "C-TAIL"])]
    assert ids == ["C-1-1", "C-TAIL"]
    with pytest.raises(UnknownCheck):
        resolve_checks(["C-XX"])


def test_all_checks_pass_small_primes():
    report = verify_range("all", 100)
    assert report.passed, report.failures


def test_denominator_error_is_reported_not_raised_in_sweep():
    bad = CongruenceCheck("X-BAD", "divides by p", 1, lambda p: p > 2,
                          lhs=lambda p: Fraction(1, p), rhs=lambda p: Fraction(0))
    with pytest.raises(DenominatorDivisibleByP) as info:
        verify(bad, 5)
    assert "X-BAD" in str(info.value) and info.value.valuation == 1
    report = verify_range([bad], 11)
    assert len(report.rows) == 4
    assert all(r.error and not r.passed for r in report.rows)
    assert report.summary()["errors"] == 4


def test_report_picks_worst_instance():
    def family(p):
        yield Instance("good", Fraction(1), Fraction(1 + p**3), 2)
        yield Instance("bad", Fraction(1), Fraction(2), 2)

    r = verify(CongruenceCheck("X-FAM", "", 2, lambda p: True, family=family), 5)
    assert r.instance == "bad" and not r.passed and r.valuation == 0


def test_valuation_cap():
    exact = CongruenceCheck("X-EQ", "", 2, lambda p: True, lhs=lambda p: Fraction(3), rhs=lambda p: Fraction(3))
    r = verify(exact, 7)
    assert r.capped and r.valuation == 5 and r.valuation_text == ">=5"


@pytest.mark.parametrize("check", REGISTRY, ids=lambda c: c.id)
def test_mutation_sensitivity_small(check):
    p = next(q for q in primes_up_to(20) if check.applicable(q))
    assert verify(check, p).passed
    assert not verify(with_rhs_shift(check, -1), p).passed
    assert verify(with_rhs_shift(check, 0), p).passed


def test_tail_reflection_matches_direct_form():
    for p in primes_up_to(60)[1:]:
        for k in range((p + 1) // 2, p):
            direct = sum(Fraction(binomial(k, n) * (-1) ** n, 2**n) for n in range(p - k))
            assert tail_sum(p, k) == direct


def test_consistency_chain():
    for p in primes_up_to(150)[2:]:
        m = PrimePowerModulus(p, 2)
        left = reduce(lhs_1_4(p) * p, m)
        right = reduce(Fraction(p, 2) * lhs_1_3(p) + lhs_1_1(p) - lhs_2_5(p), m)
        assert left == right, p
        for cid in ("C-1-1", "C-1-3", "C-2-5", "C-1-4"):
            assert verify(CHECKS[cid], p).passed


def test_parallel_matches_serial():
    checks = ["C-1-3", "C-TAIL", "C-2-1"]
    serial = verify_range(checks, 60, workers=1)
    parallel = verify_range(checks, 60, workers=3)
    strip = lambda rows: [replace(r, elapsed=0.0) for r in rows]
    assert strip(serial.rows) == strip(parallel.rows)


def test_c_1_2_restricted_but_holds_at_three():
    from supercong.congruences import lhs_1_2, rhs_1_2

    assert not CHECKS["C-1-2"].applicable(3)
    m = PrimePowerModulus(3, 3)
    # 1 + 4/16 = 5/4 against -1 + 9 * E_0
    assert lhs_1_2(3) == Fraction(5, 4)
    assert reduce(lhs_1_2(3), m) == reduce(rhs_1_2(3), m)
