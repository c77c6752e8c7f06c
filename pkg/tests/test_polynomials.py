import random

from gmpy2 import mpq
import pytest
from hypothesis import given, settings, strategies as st

from belyi.intmath import DomainError
from belyi.numberfield import NumberField
from belyi.parsing import parse_field, parse_poly
from belyi.polynomials import (QQ, NumberFieldRing, PolyRing, Polynomial,
                               affine_relate, compose, decompose, norm_poly,
                               resultant, rmap_normalize)

X = Polynomial.x(QQ)


def test_derivative_examples():
    assert (X ** 4).derivative() == parse_poly("4*x^3")
    assert parse_poly("x + x^2 + x^4").derivative() == parse_poly("1 + 2*x + 4*x^3")
    assert Polynomial(QQ, [5]).derivative().is_zero()


def test_resultant_examples():
    assert resultant(parse_poly("x^2-1"), parse_poly("x-2")) == 3
    assert resultant(parse_poly("x^2"), parse_poly("x")) == 0
    pr = PolyRing(QQ)
    x_param = Polynomial.constant(pr, X)
    y = Polynomial.x(pr)
    assert resultant(x_param - y ** 4, 4 * y ** 3) == 256 * X ** 3
    with pytest.raises(DomainError):
        resultant(Polynomial(QQ, []), Polynomial(QQ, []))


@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4),
       st.lists(st.integers(-5, 5), min_size=2, max_size=4),
       st.lists(st.integers(-5, 5), min_size=2, max_size=4))
@settings(max_examples=60)
def test_resultant_multiplicative(a, b, c):
    f, g, h = (Polynomial(QQ, cs) for cs in (a, b, c))
    if f.is_zero() or g.is_zero() or h.is_zero():
        return
    assert resultant(f * g, h) == resultant(f, h) * resultant(g, h)


def test_norm_poly_examples():
    K11 = parse_field("x^2+11")
    assert norm_poly(parse_poly("x - g", K11)) == parse_poly("x^2+11")
    assert norm_poly(parse_poly("x^3+2")) == parse_poly("x^3+2")
    K5 = parse_field("x^2-5")
    assert norm_poly(parse_poly("x^2 - g", K5)) == parse_poly("x^4-5")


def test_norm_poly_multiplicative():
    K = parse_field("x^2-5")
    rng = random.Random(11)
    ring = NumberFieldRing(K)
    for _ in range(20):
        f = Polynomial(ring, [K.element([rng.randint(-4, 4), rng.randint(-4, 4)])
                              for _ in range(rng.randint(1, 3))] + [K.one()])
        g = Polynomial(ring, [K.element([rng.randint(-4, 4), rng.randint(-4, 4)])
                              for _ in range(rng.randint(1, 3))] + [K.one()])
        assert norm_poly(f * g) == norm_poly(f) * norm_poly(g)


def test_norm_monic_in_monic_out():
    K = parse_field("x^2+11")
    f = parse_poly("x^3 + g*x + 1 - g", K)
    n = norm_poly(f)
    assert n.is_monic() and n.degree == 6


def test_compose_examples():
    assert compose(parse_poly("x^2"), parse_poly("x+1")) == parse_poly("x^2+2*x+1")
    assert compose(parse_poly("x^2+2*x"), parse_poly("x^2")) == parse_poly("x^4+2*x^2")
    assert compose(parse_poly("4*x-4*x^2"), parse_poly("x/2")) == parse_poly("2*x-x^2")


def test_decompose_examples():
    assert decompose(parse_poly("x^4+2*x^2"), 2) == \
        (parse_poly("x^2+2*x"), parse_poly("x^2"))
    assert decompose(parse_poly("x^6"), 3) == (parse_poly("x^2"), parse_poly("x^3"))
    assert decompose(parse_poly("x^4+x+1"), 2) is None
    with pytest.raises(DomainError):
        decompose(parse_poly("x^4"), 3)


def test_decompose_compose_round_trips():
    rng = random.Random(5)
    for _ in range(100):
        dh = rng.randint(1, 4)
        dg = rng.randint(1, 12 // dh)
        h = Polynomial(QQ, [0] + [mpq(rng.randint(-6, 6)) for _ in range(dh - 1)] + [1])
        g = Polynomial(QQ, [mpq(rng.randint(-6, 6)) for _ in range(dg)] +
                       [mpq(rng.choice([1, 2, 3, -1, -2]))])
        f = compose(g, h)
        out = decompose(f, dh)
        assert out is not None
        g2, h2 = out
        assert h2 == h and g2 == g        # uniqueness of the inner factor
        assert compose(g2, h2) == f


def test_affine_relate_examples():
    assert affine_relate(parse_poly("x^2+x"), parse_poly("2*x^2+2*x+3")) == (mpq(2), mpq(3))
    assert affine_relate(parse_poly("x^3"), parse_poly("x^3")) == (mpq(1), mpq(0))
    assert affine_relate(parse_poly("x^2+x"), parse_poly("x^2+2*x")) is None
    with pytest.raises(DomainError):
        affine_relate(parse_poly("x^2"), parse_poly("x^3"))


def test_affine_relate_round_trips():
    rng = random.Random(9)
    x = Polynomial.x(QQ)
    for _ in range(100):
        d = rng.randint(1, 5)
        h1 = Polynomial(QQ, [mpq(rng.randint(-5, 5)) for _ in range(d)] +
                        [mpq(rng.choice([1, 2, -1]))])
        f1 = Polynomial(QQ, [mpq(rng.randint(-5, 5)) for _ in range(rng.randint(1, 3))] +
                        [mpq(1)])
        a = mpq(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2, 3]))
        b = mpq(rng.randint(-5, 5))
        h2 = h1.scale(a) + Polynomial(QQ, [b])
        f2 = f1.compose((x - Polynomial(QQ, [b])).scale(1 / a))
        got = affine_relate(h1, h2)
        assert got == (a, b)
        assert f1.compose(h1) == f2.compose(h2)


def test_rmap_normalize_examples():
    r = rmap_normalize(parse_poly("x^2-1"), parse_poly("x-1"))
    assert r.num == parse_poly("x+1") and r.den == parse_poly("1")
    r = rmap_normalize(parse_poly("x^3"), parse_poly("x"))
    assert r.num == parse_poly("x^2")
    num = parse_poly("(1-2*x)^3*(1-3*x)^5")
    den = parse_poly("(1-x)^2")
    r = rmap_normalize(num, den)
    assert r.degree == 8
    assert r.num.degree == 8 and r.den.degree == 2
    with pytest.raises(ZeroDivisionError):
        rmap_normalize(parse_poly("x"), Polynomial(QQ, []))


def test_gcd_and_squarefree():
    f = (X - 1) ** 3 * (X + 2) ** 2 * (X - 5)
    assert f.squarefree_part() == ((X - 1) * (X + 2) * (X - 5)).monic()
    dec = dict((m, p) for p, m in f.squarefree_decomposition())
    assert dec[3] == (X - 1).monic()
    assert dec[2] == (X + 2).monic()
    assert dec[1] == (X - 5).monic()


def test_polynomial_over_field_division():
    K = parse_field("x^2+11")
    f = parse_poly("x^3 + g*x^2 - x + 1", K)
    g = parse_poly("x - g", K)
    q, r = divmod(f, g)
    assert q * g + r == f
