from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from supercong.arith import (
    INFINITY,
    DenominatorDivisibleByP,
    ModulusMismatch,
    NotInvertible,
    NotPrime,
    PrimePowerModulus,
    Residue,
    format_rational,
    is_prime,
    mod_inverse,
    padic_valuation,
    parse_rational,
    pow_mod,
    reduce,
)

from .conftest import brute_residue, brute_valuation, trial_division_primes

SMALL_PRIMES = trial_division_primes(100)
primes = st.sampled_from(SMALL_PRIMES)
exponents = st.integers(1, 3)
rationals = st.builds(Fraction, st.integers(-10**12, 10**12), st.integers(1, 10**9))


def test_is_prime_matches_trial_division():
    assert [n for n in range(3000) if is_prime(n)] == trial_division_primes(2999)
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("n, p, expected", [(250, 5, 3), (448, 2, 6), (1, 3, 0), (-81, 3, 4)])
def test_padic_valuation(n, p, expected):
    assert padic_valuation(n, p) == expected
    assert brute_valuation(n, p) == expected


def test_valuation_of_zero_is_infinite():
    v = padic_valuation(0, 7)
    assert v is INFINITY
    assert v > 10**100 and v >= 3 and not v < 5
    assert str(v) == "inf"
    assert padic_valuation(0, 7, cap=6) == 6


def test_valuation_cap():
    assert padic_valuation(5**10, 5, cap=4) == 4
    assert padic_valuation(5**2, 5, cap=4) == 2


def test_valuation_rejects_composite():
    with pytest.raises(NotPrime):
        padic_valuation(12, 6)


@given(st.integers(-10**30, 10**30).filter(bool), st.integers(-10**30, 10**30).filter(bool), primes)
def test_valuation_additive(a, b, p):
    assert padic_valuation(a * b, p) == padic_valuation(a, p) + padic_valuation(b, p)


def test_mod_inverse_examples():
    m = PrimePowerModulus(5, 3)
    assert mod_inverse(64, m).value == 84 == brute_residue(Fraction(1, 64), 125)
    assert mod_inverse(12, m).value == 73 == brute_residue(Fraction(1, 12), 125)
    assert mod_inverse(1, PrimePowerModulus(7, 2)).value == 1
    with pytest.raises(NotInvertible):
        mod_inverse(10, m)


def test_mod_inverse_exhaustive():
    for p in trial_division_primes(1000):
        e = 1
        while p**e < 1000:
            m = PrimePowerModulus(p, e)
            for a in range(1, p**e):
                if a % p:
                    assert a * mod_inverse(a, m).value % m.modulus == 1
            e += 1


def test_reduce_examples():
    assert reduce(Fraction(13, 12), PrimePowerModulus(5, 3)).value == 74
    assert brute_residue(Fraction(13, 12), 125) == 74
    assert reduce(-24, PrimePowerModulus(5, 3)).value == 101
    assert reduce(Fraction(13, 4), PrimePowerModulus(3, 3)).value == 10
    assert brute_residue(Fraction(13, 4), 27) == 10


def test_reduce_reports_valuation():
    with pytest.raises(DenominatorDivisibleByP) as info:
        reduce(Fraction(1, 50), PrimePowerModulus(5, 2))
    assert info.value.valuation == 2
    assert info.value.p == 5


@given(rationals, rationals, primes, exponents)
def test_reduce_is_ring_homomorphism(x, y, p, e):
    assume(x.denominator % p and y.denominator % p)
    m = PrimePowerModulus(p, e)
    assert reduce(x + y, m) == reduce(x, m) + reduce(y, m)
    assert reduce(x * y, m) == reduce(x, m) * reduce(y, m)
    assert reduce(-x, m) == -reduce(x, m)


@given(rationals, rationals)
def test_fraction_stays_normalized(x, y):
    for z in (x + y, x - y, x * y):
        assert z.denominator > 0
        assert gcd(abs(z.numerator), z.denominator) == 1


def test_pow_mod():
    m = PrimePowerModulus(5, 3)
    assert pow_mod(2, 4, m).value == 16
    assert pow_mod(4, 4, m).value == 6
    assert pow_mod(2, 0, m).value == 1
    assert pow_mod(-3, 5, m).value == (-243) % 125


def test_modulus_validation():
    assert PrimePowerModulus(7, 2).modulus == 49
    with pytest.raises(NotPrime):
        PrimePowerModulus(9, 1)
    with pytest.raises(ValueError):
        PrimePowerModulus(7, 0)


def test_residue_arithmetic():
    m = PrimePowerModulus(3, 3)
    a, b = Residue(10, m), Residue(20, m)
    assert (a + b).value == 3
    assert (a - b).value == 17
    assert (a * b).value == 200 % 27
    assert (a * a.inverse()).value == 1
    assert (a ** -1).value == a.inverse().value
    assert (1 - a).value == 18
    with pytest.raises(ValueError):
        Residue(27, m)
    with pytest.raises(ModulusMismatch):
        a + Residue(1, PrimePowerModulus(3, 2))


@pytest.mark.parametrize("text", ["0", "-7", "13/12", "-691/2730"])
def test_rational_text_roundtrip(text):
    assert format_rational(parse_rational(text)) == text


@pytest.mark.parametrize("text", ["2/4", "1/-3", "5/1", "x"])
def test_parse_rational_rejects_noncanonical(text):
    with pytest.raises(ValueError):
        parse_rational(text)
