"""Exact integer/rational arithmetic and reduction into residue rings mod p^e.

Integers are Python ``int`` and rationals are :class:`fractions.Fraction`,
which is always kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[int, Fraction]

# Bases that make Miller-Rabin deterministic below 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class ArithmeticDomainError(ValueError):
    """Base class for the typed errors raised by this module."""


class NotPrime(ArithmeticDomainError):
    pass


class NotInvertible(ArithmeticDomainError):
    pass


class DenominatorDivisibleByP(ArithmeticDomainError):
    """A rational cannot be reduced because p divides its denominator."""

    def __init__(self, value: Fraction, p: int, valuation: int, context: str = ""):
        self.value = value
        self.p = p
        self.valuation = valuation
        self.context = context
        prefix = f"{context}: " if context else ""
        super().__init__(
            f"{prefix}denominator of {value.numerator}/{value.denominator} is divisible "
            f"by {p}^{valuation}"
        )


class ModulusMismatch(ArithmeticDomainError):
    pass


class _Infinity:
    """Valuation of zero; compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("supercong.INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


def padic_valuation(n: int, p: int, cap: int | None = None):
    """Largest ``v`` with ``p**v | n``; :data:`INFINITY` for ``n == 0``.

    With ``cap`` set, counting stops at ``cap`` (zero then also returns ``cap``).
    """
    _require_prime(p)
    if n == 0:
        return INFINITY if cap is None else cap
    n = abs(n)
    v = 0
    while n % p == 0 and (cap is None or v < cap):
        n //= p
        v += 1
    return v


def rational_valuation(x: RationalLike, p: int, cap: int | None = None):
    x = Fraction(x)
    if x == 0:
        return padic_valuation(0, p, cap)
    return padic_valuation(x.numerator, p, cap) - padic_valuation(x.denominator, p)


@dataclass(frozen=True)
class PrimePowerModulus:
    p: int
    e: int

    def __post_init__(self):
        if not isinstance(self.e, int) or self.e < 1:
            raise ValueError(f"exponent must be a positive integer, got {self.e!r}")
        _require_prime(self.p)

    @property
    def modulus(self) -> int:
        return self.p**self.e

    def __str__(self):
        return f"{self.p}^{self.e}"


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: PrimePowerModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.modulus:
            raise ValueError(f"{self.value} is not canonical mod {self.modulus}")

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _make(self, v: int) -> Residue:
        return Residue(v % self.modulus.modulus, self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def __pow__(self, exp: int):
        if exp < 0:
            return mod_inverse(self.value, self.modulus) ** -exp
        return self._make(pow(self.value, exp, self.modulus.modulus))

    def inverse(self) -> Residue:
        return mod_inverse(self.value, self.modulus)

    def __int__(self):
        return self.value


def mod_inverse(a: int, m: PrimePowerModulus) -> Residue:
    if a % m.p == 0:
        raise NotInvertible(f"{a} is divisible by {m.p}")
    return Residue(pow(a, -1, m.modulus), m)


def reduce(x: RationalLike, m: PrimePowerModulus) -> Residue:
    """Image of ``x`` in Z/p^eZ; requires a p-free denominator."""
    x = Fraction(x)
    den = x.denominator
    if den % m.p == 0:
        raise DenominatorDivisibleByP(x, m.p, padic_valuation(den, m.p))
    mod = m.modulus
    return Residue(x.numerator * pow(den, -1, mod) % mod, m)


def pow_mod(base: int, exp: int, m: PrimePowerModulus) -> Residue:
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    mod = m.modulus
    result, b = 1 % mod, base % mod
    while exp:
        if exp & 1:
            result = result * b % mod
        b = b * b % mod
        exp >>= 1
    return Residue(result, m)


def format_rational(x: RationalLike) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; rejects non-canonical input."""
    num, sep, den = text.strip().partition("/")
    value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    if format_rational(value) != text.strip():
        raise ValueError(f"{text!r} is not a canonical rational")
    return value
