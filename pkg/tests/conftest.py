from fractions import Fraction

import pytest

_ACCEPTANCE: list[str] = []


def brute_residue(x, modulus: int) -> int:
    """The unique r in [0, modulus) with den * r == num (mod modulus), by search."""
    x = Fraction(x)
    hits = [r for r in range(modulus) if (x.denominator * r - x.numerator) % modulus == 0]
    assert len(hits) == 1, hits
    return hits[0]


def brute_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def trial_division_primes(bound: int) -> list[int]:
    return [n for n in range(2, bound + 1) if all(n % d for d in range(2, n))]


@pytest.fixture
def acceptance():
    """Record a criterion's verdict for the end-of-run summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
