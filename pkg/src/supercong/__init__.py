"""Exact arithmetic and verification harness for supercongruences involving
Catalan-Larcombe-French numbers, Bernoulli/Euler numbers and harmonic sums."""

from .arith import (
    INFINITY,
    DenominatorDivisibleByP,
    NotInvertible,
    NotPrime,
    PrimePowerModulus,
    Residue,
    mod_inverse,
    padic_valuation,
    pow_mod,
    reduce,
)
from .congruences import (
    CHECKS,
    REGISTRY,
    CongruenceCheck,
    NotApplicable,
    VerificationReport,
    verify,
    verify_range,
)
from .identities import IDENTITIES, run_identities
from .sequences import (
    SequenceCache,
    bernoulli,
    binomial,
    clf,
    clf_even_form,
    clf_next_by_recurrence,
    euler_number,
    fermat_quotient_two,
    harmonic,
    legendre_minus_one,
    odd_harmonic,
    primes_up_to,
    s_sun_form_a,
    s_sun_form_b,
    zagier_s,
)

__version__ = "0.1.0"
