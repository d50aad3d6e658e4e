"""Exact sequences: binomials, harmonic sums, Bernoulli/Euler numbers,
Catalan-Larcombe-French numbers and their companion S_n forms.

Every table lives in a :class:`SequenceCache`; the module-level functions
delegate to a process-wide default cache.
"""

from __future__ import annotations

import json
import logging
import math
import random
import threading
from fractions import Fraction
from pathlib import Path

from .arith import format_rational, is_prime, parse_rational

log = logging.getLogger(__name__)

CACHE_FORMAT = "supercong-bernoulli-euler"
CACHE_VERSION = 1


class InternalNonInteger(ArithmeticError):
    """A quantity that must be an integer came out fractional."""


class NonDivisible(ArithmeticError):
    """The CLF recurrence produced a non-exact division."""


class CacheValidationError(ValueError):
    pass


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with the falling-factorial convention for n < 0."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)  # 0 when k > n
    sign = -1 if k % 2 else 1
    return sign * math.comb(k - n - 1, k)


def _bernoulli_residual(n: int, table: list[Fraction], upper: int | None = None) -> Fraction:
    # sum_{k<upper} C(n,k) B_k; with upper = n it must vanish for n >= 2
    total = Fraction(0)
    for k in range(n if upper is None else upper):
        if table[k]:
            total += math.comb(n, k) * table[k]
    return total


def _euler_from_table(n: int, table: list[int]) -> int:
    total = 0
    for k in range(1, n // 2 + 1):
        e = table[n - 2 * k]
        if e:
            total += math.comb(n, 2 * k) * e
    return -total


class SequenceCache:
    """Append-only memo tables, safe to share between threads.

    ``path`` names an optional JSON file of precomputed Bernoulli/Euler
    numbers. It is read the first time either table is needed and checked
    against the defining recurrences before any entry is used.
    """

    def __init__(self, path: str | Path | None = None, *, spot_checks: int = 5):
        self._lock = threading.RLock()
        self.path = Path(path) if path is not None else None
        self.spot_checks = spot_checks
        self._loaded = path is None
        self._central = [1]
        self._bernoulli = [Fraction(1)]
        self._euler = [1]
        self._clf: list[int] = []
        self._harmonic = [Fraction(0)]
        self._odd_harmonic = [Fraction(0)]

    # -- persistence ------------------------------------------------------

    def _ensure_loaded(self):
        if self._loaded:
            return
        with self._lock:
            if self._loaded:
                return
            self._loaded = True
            if self.path.exists():
                bern, eul = load_tables(self.path, spot_checks=self.spot_checks)
                if len(bern) > len(self._bernoulli):
                    self._bernoulli = bern
                if len(eul) > len(self._euler):
                    self._euler = eul
                log.debug("loaded %d B / %d E entries from %s", len(bern), len(eul), self.path)
            else:
                log.debug("cache file %s not found; computing from scratch", self.path)

    def save(self, path: str | Path | None = None) -> Path:
        self._ensure_loaded()
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no cache path given")
        with self._lock:
            save_tables(target, self._bernoulli, self._euler)
        return target

    @property
    def bernoulli_table(self) -> tuple[Fraction, ...]:
        self._ensure_loaded()
        return tuple(self._bernoulli)

    @property
    def euler_table(self) -> tuple[int, ...]:
        self._ensure_loaded()
        return tuple(self._euler)

    # -- tables -----------------------------------------------------------

    def central_binomial(self, k: int) -> int:
        """C(2k, k)."""
        t = self._central
        if k < len(t):
            return t[k]
        with self._lock:
            while len(t) <= k:
                j = len(t)
                t.append(t[-1] * 2 * (2 * j - 1) // j)
        return t[k]

    def harmonic(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be non-negative")
        t = self._harmonic
        if n < len(t):
            return t[n]
        with self._lock:
            while len(t) <= n:
                t.append(t[-1] + Fraction(1, len(t)))
        return t[n]

    def odd_harmonic(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("k must be non-negative")
        t = self._odd_harmonic
        if k < len(t):
            return t[k]
        with self._lock:
            while len(t) <= k:
                t.append(t[-1] + Fraction(1, 2 * len(t) - 1))
        return t[k]

    def bernoulli(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be non-negative")
        self._ensure_loaded()
        t = self._bernoulli
        if n < len(t):
            return t[n]
        with self._lock:
            while len(t) <= n:
                m = len(t)
                # recurrence at index m + 1 determines B_m
                t.append(-_bernoulli_residual(m + 1, t, m) / (m + 1))
        return t[n]

    def euler(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be non-negative")
        self._ensure_loaded()
        t = self._euler
        if n < len(t):
            return t[n]
        with self._lock:
            while len(t) <= n:
                t.append(_euler_from_table(len(t), t))
        return t[n]

    def clf(self, n: int) -> int:
        if n < 0:
            raise ValueError("n must be non-negative")
        t = self._clf
        if n < len(t):
            return t[n]
        with self._lock:
            while len(t) <= n:
                t.append(self._clf_definition(len(t)))
        return t[n]

    def _clf_definition(self, n: int) -> int:
        c = self.central_binomial
        total = Fraction(0)
        for k in range(n + 1):
            total += Fraction((c(k) * c(n - k)) ** 2, math.comb(n, k))
        if total.denominator != 1:
            raise InternalNonInteger(f"P_{n} evaluated to {format_rational(total)}")
        return total.numerator


def save_tables(path: str | Path, bernoulli: list[Fraction], euler: list[int]) -> None:
    payload = {
        "format": CACHE_FORMAT,
        "version": CACHE_VERSION,
        "bernoulli": [format_rational(b) for b in bernoulli],
        "euler": [str(e) for e in euler],
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def load_tables(
    path: str | Path, *, spot_checks: int | None = 5, seed: int | None = None
) -> tuple[list[Fraction], list[int]]:
    """Read and validate a cache file.

    ``spot_checks=None`` validates every entry; otherwise the first entries
    plus ``spot_checks`` random indices per table are checked.
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CacheValidationError(f"cannot read cache {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != CACHE_FORMAT:
        raise CacheValidationError(f"{path} is not a {CACHE_FORMAT} file")
    if payload.get("version") != CACHE_VERSION:
        raise CacheValidationError(f"unsupported cache version {payload.get('version')!r}")
    try:
        bern = [parse_rational(s) for s in payload["bernoulli"]]
        eul = [int(parse_rational(s)) if "/" not in s else None for s in payload["euler"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CacheValidationError(f"malformed cache entry: {exc}") from exc
    if not bern or bern[0] != 1:
        raise CacheValidationError("B_0 must be 1")
    if not eul or eul[0] != 1 or any(e is None for e in eul):
        raise CacheValidationError("Euler table must be integers with E_0 = 1")

    rng = random.Random(seed)

    def indices(size: int) -> list[int]:
        if spot_checks is None:
            return list(range(1, size))
        head = list(range(1, min(size, 4)))
        tail = rng.sample(range(1, size), min(spot_checks, size - 1)) if size > 1 else []
        return sorted(set(head + tail + ([size - 1] if size > 1 else [])))

    for m in indices(len(bern)):
        if _bernoulli_residual(m + 1, bern) != 0:
            raise CacheValidationError(f"B_{m} fails the Bernoulli recurrence")
    for m in indices(len(eul)):
        if _euler_from_table(m, eul) != eul[m]:
            raise CacheValidationError(f"E_{m} fails the Euler recurrence")
    return bern, eul


_default = SequenceCache()


def default_cache() -> SequenceCache:
    return _default


def set_default_cache(cache: SequenceCache) -> SequenceCache:
    """Install ``cache`` as the process-wide default; returns the old one."""
    global _default
    old, _default = _default, cache
    return old


def harmonic(n: int) -> Fraction:
    return _default.harmonic(n)


def odd_harmonic(k: int) -> Fraction:
    """Sum of 1/(2j-1) for j = 1..k."""
    return _default.odd_harmonic(k)


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    return _default.bernoulli(n)


def euler_number(n: int) -> int:
    return _default.euler(n)


def central_binomial(k: int) -> int:
    return _default.central_binomial(k)


def clf(n: int) -> int:
    """Catalan-Larcombe-French number from its defining binomial sum."""
    return _default.clf(n)


def clf_even_form(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    c = central_binomial
    return 2**n * sum(math.comb(n, 2 * k) * c(k) ** 2 * 4 ** (n - 2 * k) for k in range(n // 2 + 1))


def clf_next_by_recurrence(n: int, p_n: int, p_prev: int, *, leading_exponent: int = 2) -> int:
    """P_{n+1} from P_n and P_{n-1}.

    ``leading_exponent`` is the power of (n+1) on the left-hand side; the
    valid recurrence needs 2.
    """
    if n < 1:
        raise ValueError("recurrence needs n >= 1")
    num = (24 * n * (n + 1) + 8) * p_n - 128 * n * n * p_prev
    den = (n + 1) ** leading_exponent
    q, r = divmod(num, den)
    if r:
        raise NonDivisible(f"{num} is not divisible by {den} at n={n}")
    return q


def first_recurrence_disagreement(n_max: int, *, leading_exponent: int = 2) -> int | None:
    """Smallest n in [1, n_max) where the recurrence fails to give clf(n+1)."""
    for n in range(1, n_max):
        try:
            nxt = clf_next_by_recurrence(n, clf(n), clf(n - 1), leading_exponent=leading_exponent)
        except NonDivisible:
            return n
        if nxt != clf(n + 1):
            return n
    return None


def zagier_s(n: int) -> int:
    """S_n = P_n / 2^n via the binomial sum; checked against clf(n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    c = central_binomial
    s = sum(c(k) ** 2 * math.comb(n, 2 * k) * 4 ** (n - 2 * k) for k in range(n // 2 + 1))
    if s << n != clf(n):
        raise InternalNonInteger(f"2^{n} S_{n} != P_{n}")
    return s


def s_sun_form_a(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    c = central_binomial
    return sum(c(k) ** 2 * binomial(k, n - k) * (-4) ** (n - k) for k in range((n + 1) // 2, n + 1))


def s_sun_form_b(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    c = central_binomial
    total = sum(
        c(k) * c(n - k) * binomial(k, n - k) * (-4) ** k for k in range((n + 1) // 2, n + 1)
    )
    q, r = divmod(total, (-2) ** n)
    if r:
        raise InternalNonInteger(f"form b of S_{n} is {total}/(-2)^{n}")
    return q


def fermat_quotient_two(p: int) -> int:
    """(2^(p-1) - 1) / p for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return (pow(2, p - 1) - 1) // p


def legendre_minus_one(p: int) -> int:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    return 1 if p % 4 == 1 else -1


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]
