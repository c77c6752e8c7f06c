from gmpy2 import mpq, mpz
import pytest
from hypothesis import given, strategies as st

from belyi.intmath import DomainError
from belyi.numberfield import (NumberField, QuadraticElement, apply_automorphism,
                               nf_arith, sqrt_in_quadratic, sqrt_rational)

K11 = NumberField([11, 0, 1])       # x^2 + 11
K5 = NumberField([-5, 0, 1])        # x^2 - 5
PHI = NumberField([-1, -1, 1])      # x^2 - x - 1
K32 = NumberField([-2, 0, 0, 1])    # x^3 - 2

rationals = st.builds(mpq, st.integers(-50, 50), st.integers(1, 20))


def test_nf_arith_defining_relations():
    g = K11.gen()
    assert nf_arith("mul", g, g) == K11.from_rational(-11)
    w = PHI.gen()          # (1 + sqrt 5)/2
    conj = w.conjugate()   # (1 - sqrt 5)/2
    assert nf_arith("add", w, conj) == PHI.one()
    a = K32.gen()
    assert nf_arith("mul", a, a * a) == K32.from_rational(2)


def test_nf_arith_errors():
    with pytest.raises(ZeroDivisionError):
        nf_arith("div", K11.one(), K11.zero())
    with pytest.raises(DomainError):
        nf_arith("add", K11.one(), K5.one())
    with pytest.raises(DomainError):
        nf_arith("xor", K11.one(), K11.one())


def test_apply_automorphism_examples():
    x = QuadraticElement(mpq(-2, 9), mpq(2, 9), -11)
    assert apply_automorphism(x) == QuadraticElement(mpq(-2, 9), mpq(-2, 9), -11)
    assert apply_automorphism(mpq(7)) == 7
    r5 = QuadraticElement(0, 1, 5)
    assert apply_automorphism(r5) == QuadraticElement(0, -1, 5)
    with pytest.raises(DomainError):
        apply_automorphism(K32.gen())


@given(st.tuples(rationals, rationals, rationals, rationals))
def test_conjugation_is_ring_homomorphism(coords):
    a, b, c, d = coords
    x = QuadraticElement(a, b, -11)
    y = QuadraticElement(c, d, -11)
    assert apply_automorphism(x * y) == apply_automorphism(x) * apply_automorphism(y)
    assert apply_automorphism(x + y) == apply_automorphism(x) + apply_automorphism(y)
    assert apply_automorphism(apply_automorphism(x)) == x


@given(st.tuples(rationals, rationals))
def test_conjugation_on_power_basis_elements(coords):
    x = K5.element(coords)
    y = K5.element(coords[::-1])
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.conjugate().conjugate() == x


@given(st.integers(-100, 100), st.integers(-100, 100))
def test_rational_embedding(m, n):
    assert mpq(m) + mpq(n) == m + n
    assert mpq(m) * mpq(n) == m * n
    assert K11.from_rational(m) * K11.from_rational(n) == K11.from_rational(m * n)


def test_division_round_trip():
    x = K11.element([mpq(3, 7), mpq(-2, 5)])
    y = K11.element([mpq(1, 2), mpq(4)])
    assert (x / y) * y == x
    q = QuadraticElement(mpq(2, 3), mpq(-5, 7), 13)
    assert (1 / q) * q == QuadraticElement(1, 0, 13)


def test_quadratic_representation_round_trip():
    w = PHI.gen()
    q = w.to_quadratic()
    assert q == QuadraticElement(mpq(1, 2), mpq(1, 2), 5)
    assert q.to_algebraic(PHI) == w


def test_irreducibility_checks():
    with pytest.raises(DomainError):
        NumberField([1, 2, 1])            # (x+1)^2
    with pytest.raises(DomainError):
        NumberField([-6, 1, 1])           # (x+3)(x-2)
    with pytest.raises(DomainError):
        NumberField([4, 0, 5, 0, 1])      # (x^2+1)(x^2+4)
    with pytest.raises(DomainError):
        NumberField([1, 2, 3, 2, 1])      # (x^2+x+1)^2
    NumberField([1, 0, 0, 0, 1])          # x^4+1 is fine
    NumberField([-2, 0, 0, 0, 1])         # x^4-2 is fine
    NumberField([1, 1, 1])                # x^2+x+1 is fine


def test_discriminants():
    assert K11.discriminant_info() == (-11, True)
    assert NumberField([5, 0, 1]).discriminant_info() == (-20, True)
    disc, exact = K32.discriminant_info()
    assert disc == -108 and not exact


def test_quadratic_sign_comparisons():
    phi = QuadraticElement(mpq(1, 2), mpq(1, 2), 5)
    assert phi.sign() == 1
    assert (phi - 1).sign() == 1
    assert (phi - 2).sign() == -1
    with pytest.raises(DomainError):
        QuadraticElement(1, 1, -5).sign()


@given(st.tuples(rationals, rationals))
def test_sqrt_in_quadratic_round_trip(coords):
    a, b = coords
    x = QuadraticElement(a, b, 7)
    sq = x * x
    root = sqrt_in_quadratic(sq, 7)
    assert root is not None
    assert root * root == sq


def test_sqrt_rational():
    assert sqrt_rational(mpq(9, 4)) == mpq(3, 2)
    assert sqrt_rational(mpq(2)) is None
    assert sqrt_rational(mpq(-1)) is None
