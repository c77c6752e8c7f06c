"""Integer and rational ground arithmetic: primality, factoring, squarefree parts.

All exact arithmetic in this package runs on gmpy2's mpz/mpq types; helper
functions here accept plain ints as well and always return gmpy2 types.
"""

from __future__ import annotations

import itertools

from gmpy2 import mpq, mpz
import gmpy2


class DomainError(ValueError):
    """A precondition on mathematical input was violated."""


def rational(num, den=1) -> mpq:
    """Coerce to an exact rational; rejects floats to avoid silent rounding."""
    if isinstance(num, float) or isinstance(den, float):
        raise DomainError("floats are not exact; pass ints, strings or mpq")
    return mpq(num, den)


def isqrt(n) -> mpz:
    if n < 0:
        raise DomainError("isqrt of negative number")
    return gmpy2.isqrt(mpz(n))


def is_square(n) -> bool:
    return n >= 0 and gmpy2.is_square(mpz(n))


def is_prime(n) -> bool:
    """Deterministic for anything desk-sized (BPSW + extra rounds)."""
    n = mpz(n)
    if n < 2:
        return False
    return gmpy2.is_prime(n, 40)


def next_prime(n) -> mpz:
    return gmpy2.next_prime(mpz(n))


def primes_upto(limit):
    """Ascending list of primes p <= limit (simple sieve)."""
    limit = int(limit)
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [mpz(p) for p in range(limit + 1) if sieve[p]]


def _pollard_rho(n: mpz) -> mpz:
    """One nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return mpz(2)
    for c in itertools.count(1):
        x = y = mpz(2)
        d = mpz(1)
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gmpy2.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n) -> dict:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    n = mpz(abs(n))
    if n == 0:
        raise DomainError("cannot factor zero")
    factors: dict = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            factors[mpz(p)] = factors.get(mpz(p), 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        # small trial division first, rho for the hard leftovers
        found = False
        d = mpz(17)
        while d * d <= m and d < 10000:
            if m % d == 0:
                stack.extend([d, m // d])
                found = True
                break
            d += 2
        if not found:
            d = _pollard_rho(m)
            stack.extend([d, m // d])
    return dict(sorted(factors.items()))


def squarefree_part(n):
    """Write n = s * c**2 with s squarefree, sign(s) = sign(n).

    Returns (s, c) with c > 0.
    """
    n = mpz(n)
    if n == 0:
        raise DomainError("zero has no squarefree part")
    sign = 1 if n > 0 else -1
    s, c = mpz(1), mpz(1)
    for p, e in factorize(n).items():
        if e % 2:
            s *= p
        c *= p ** (e // 2)
    return sign * s, c


def is_squarefree(n) -> bool:
    s, c = squarefree_part(n)
    return c == 1


def quadratic_discriminant(d):
    """Field discriminant of Q(sqrt(d)) for squarefree d not in {0, 1}."""
    d = mpz(d)
    if d in (0, 1):
        raise DomainError("d must generate a quadratic field")
    if not is_squarefree(d):
        raise DomainError("d must be squarefree")
    return d if d % 4 == 1 else 4 * d


def prime_divisors(n) -> list:
    return list(factorize(n).keys())
