from gmpy2 import mpz
import pytest
from hypothesis import given, strategies as st

from belyi.intmath import (DomainError, factorize, is_prime, is_squarefree,
                           prime_divisors, primes_upto, quadratic_discriminant,
                           squarefree_part)


def test_squarefree_part_examples():
    assert squarefree_part(-396) == (-11, 6)
    assert squarefree_part(144) == (1, 12)
    assert squarefree_part(-7) == (-7, 1)


def test_squarefree_part_rejects_zero():
    with pytest.raises(DomainError):
        squarefree_part(0)


@given(st.integers(min_value=-10**6, max_value=10**6).filter(lambda n: n != 0))
def test_squarefree_part_reconstructs(n):
    s, c = squarefree_part(n)
    assert s * c * c == n
    assert c > 0
    assert is_squarefree(s)
    assert (s > 0) == (n > 0)


def test_quadratic_discriminant_examples():
    assert quadratic_discriminant(-11) == -11
    assert quadratic_discriminant(-5) == -20
    assert quadratic_discriminant(5) == 5


@given(st.integers(min_value=-500, max_value=500).filter(
    lambda d: d not in (0, 1)))
def test_quadratic_discriminant_bounds(d):
    s, c = squarefree_part(d)
    if c != 1:
        with pytest.raises(DomainError):
            quadratic_discriminant(d)
        return
    delta = quadratic_discriminant(d)
    assert abs(delta) <= 4 * abs(d)
    assert delta % 4 in (0, 1)


def test_factorize():
    assert factorize(2736) == {2: 4, 3: 2, 19: 1}
    assert prime_divisors(-108) == [2, 3]
    with pytest.raises(DomainError):
        factorize(0)


def test_primality():
    assert is_prime(199)
    assert not is_prime(1)
    assert not is_prime(91)
    assert primes_upto(13) == [2, 3, 5, 7, 11, 13]
