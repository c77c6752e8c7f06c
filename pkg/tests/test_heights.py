import mpmath as mp
from gmpy2 import mpq
import pytest
from hypothesis import given, settings, strategies as st

from belyi.heights import (Height, height_algebraic, height_poly_q,
                           height_rational, mahler_quadratic_exact,
                           minimal_polynomial, roy_thunder_check,
                           verify_height_inequalities)
from belyi.numberfield import NumberField, QuadraticElement
from belyi.parsing import parse_field, parse_poly

rationals = st.builds(mpq, st.integers(-200, 200), st.integers(1, 60))


def test_height_rational_examples():
    assert height_rational(mpq(3, 2)).value_rational() == 3
    assert height_rational(0).value_rational() == 1
    assert height_rational(-7).value_rational() == 7


def test_height_poly_examples():
    assert height_poly_q(parse_poly("3*x^2+2*x+1")).value_rational() == 3
    assert height_poly_q(parse_poly("6*x+2")).value_rational() == 3
    assert height_poly_q(parse_poly("x/2 + 1/3")).value_rational() == 3


def test_height_algebraic_examples():
    K = parse_field("x^2-x+3")          # (1 + sqrt(-11))/2 is a root
    h = height_algebraic(K.gen())
    assert h.exact and h.mahler_exact == 3 and h.degree == 2
    assert abs(h.value - mp.sqrt(3)) < mp.mpf(2) ** -40

    h5 = height_algebraic(mpq(5))
    assert h5.value_rational() == 5

    r5 = QuadraticElement(0, 1, 5)
    h = height_algebraic(r5)
    assert h.exact and h.mahler_exact == 5 and h.degree == 2


def test_minimal_polynomial():
    K = parse_field("x^2+11")
    half = K.element([mpq(1, 2), mpq(1, 2)])   # (1 + sqrt(-11))/2
    assert minimal_polynomial(half) == parse_poly("x^2-x+3")
    assert minimal_polynomial(mpq(5)) == parse_poly("x-5")
    K32 = parse_field("x^3-2")
    assert minimal_polynomial(K32.gen()) == parse_poly("x^3-2")


def test_height_cubic_numeric():
    K32 = parse_field("x^3-2")
    h = height_algebraic(K32.gen())
    assert not h.exact
    assert abs(h.value - mp.power(2, mp.mpf(1) / 3)) < mp.mpf(2) ** -18
    assert h.error_bound < mp.mpf(2) ** -20


@given(rationals)
def test_rational_height_matches_algebraic(x):
    assert height_rational(x).value_rational() == \
        height_algebraic(x).value_rational()


@given(rationals.filter(lambda q: q != 0))
def test_projective_symmetry(x):
    assert height_rational(x).value_rational() == \
        height_rational(1 / x).value_rational()


@given(rationals, st.integers(1, 5))
def test_power_multiplicativity(x, k):
    assert height_rational(x ** k).value_rational() == \
        height_rational(x).value_rational() ** k


def test_projective_symmetry_algebraic():
    x = QuadraticElement(mpq(3, 2), mpq(-1, 3), 7)
    h1 = height_algebraic(x)
    h2 = height_algebraic(1 / x)
    assert abs(h1.value - h2.value) <= (h1.error_bound + h2.error_bound + 2 ** -40) * h1.value


def test_mahler_quadratic_exact_cases():
    # complex pair
    assert mahler_quadratic_exact([3, -1, 1]) == 3
    # golden ratio: split real case
    m = mahler_quadratic_exact([-1, -1, 1])
    assert isinstance(m, QuadraticElement)
    assert m == QuadraticElement(mpq(1, 2), mpq(1, 2), 5)
    # both roots outside
    assert mahler_quadratic_exact([6, -5, 1]) == 6
    # rational roots
    assert mahler_quadratic_exact([-4, 0, 1]) == 4


def test_verify_height_inequalities_all_pass():
    records = verify_height_inequalities(trials=60, seed=1234, factored=25,
                                         hat_trials=15)
    assert records
    bad = [r for r in records if r["status"] != "pass"]
    assert bad == []
    lemmas = {r["lemma"] for r in records}
    assert lemmas == {"derivative_bound", "evaluation_bound",
                      "factorization_lower", "factorization_upper",
                      "critical_value_bound"}


def test_derivative_bound_equality_edge():
    f = parse_poly("x")
    assert height_poly_q(f.derivative()).value_rational() == 1
    assert height_poly_q(f).value_rational() == 1


def test_roy_thunder_examples():
    r = roy_thunder_check(parse_field("x^2+11"))
    assert r["status"] == "pass" and r["exact"]
    assert abs(mp.mpf(r["H_omega"]) - mp.sqrt(3)) < 1e-10
    r = roy_thunder_check(parse_field("x^2-5"))
    assert r["status"] == "pass"
    # M(X^2 - X - 1) is the golden ratio; H is its square root
    assert abs(mp.mpf(r["H_omega"]) ** 2 - (1 + mp.sqrt(5)) / 2) < 1e-10
    r = roy_thunder_check(parse_field("x^2+5"))
    assert r["status"] == "pass"
    assert abs(mp.mpf(r["H_omega"]) - mp.sqrt(5)) < 1e-10
