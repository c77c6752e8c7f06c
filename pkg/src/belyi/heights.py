"""Exact projective heights over Q and algebraic heights via Mahler measures.

The height of an algebraic number x is M(p)^(1/d) for p the primitive integer
minimal polynomial of x and M its Mahler measure. Degree <= 2 measures are
computed exactly (rationals or quadratic surds); higher degrees fall back to
certified numeric root isolation, refined until the relative error bound drops
below ERROR_TARGET.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import mpmath as mp
from gmpy2 import mpq, mpz
import gmpy2

from .intmath import DomainError
from .numberfield import AlgebraicElement, NumberField, QuadraticElement, sqrt_rational
from .polynomials import QQ, NumberFieldRing, Polynomial, norm_poly

ERROR_TARGET = mpq(1, 2 ** 20)
MAX_PRECISION = 4096


class PrecisionError(ArithmeticError):
    """Raised when root enclosures cannot be certified; retry with more bits."""


@dataclass
class Height:
    """A multiplicative height H = mahler^(1/degree).

    mahler_exact is an mpq or QuadraticElement when the Mahler measure is
    known exactly (then error_bound == 0); mahler_float always carries a
    numeric value with relative error at most error_bound.
    """

    degree: int
    mahler_float: object
    error_bound: object
    mahler_exact: object = None

    @property
    def exact(self) -> bool:
        return self.mahler_exact is not None

    @property
    def value(self):
        """Numeric H as an mpf."""
        return mp.power(self.mahler_float, mp.mpf(1) / self.degree)

    def value_rational(self) -> mpq:
        if self.degree == 1 and isinstance(self.mahler_exact, mpq):
            return self.mahler_exact
        raise DomainError("height is not an exact rational")

    def __repr__(self):
        tag = "exact" if self.exact else f"err<{mp.nstr(mp.mpf(self.error_bound), 3)}"
        return f"Height({mp.nstr(self.value, 12)}, deg={self.degree}, {tag})"


def _to_mpf(q) -> mp.mpf:
    q = mpq(q)
    return mp.mpf(int(q.numerator)) / mp.mpf(int(q.denominator))


def _quad_to_mpf(x) -> mp.mpf:
    """Real value of a QuadraticElement (requires D > 0) as mpf."""
    return _to_mpf(x.a) + _to_mpf(x.b) * mp.sqrt(mp.mpf(int(x.D)))


# ---------------------------------------------------------------------------
# exact heights over Q
# ---------------------------------------------------------------------------

def height_rational(x) -> Height:
    """H(x) = max(|num|, |den|) for x in lowest terms; H(0) = 1."""
    x = mpq(x)
    m = mpq(max(abs(x.numerator), abs(x.denominator)))
    return Height(degree=1, mahler_float=_to_mpf(m), error_bound=mpq(0), mahler_exact=m)


def height_poly_q(f: Polynomial) -> Height:
    """Height of a Q-polynomial: max |coefficient| after clearing to coprime
    integer coefficients."""
    if f.is_zero():
        raise DomainError("height of the zero polynomial")
    if f.ring != QQ:
        raise DomainError("height_poly_q needs rational coefficients")
    _, prim = f.rational_content_primitive()
    m = mpq(max(abs(c) for c in prim.coeffs))
    return Height(degree=1, mahler_float=_to_mpf(m), error_bound=mpq(0), mahler_exact=m)


# ---------------------------------------------------------------------------
# Mahler measures
# ---------------------------------------------------------------------------

def _primitive_int_coeffs(f: Polynomial):
    _, prim = f.rational_content_primitive()
    return [mpz(c) for c in prim.coeffs]


def minimal_polynomial(x) -> Polynomial:
    """Monic minimal polynomial over Q of an algebraic number."""
    if isinstance(x, (int, mpz, mpq)):
        return Polynomial(QQ, [-mpq(x), 1])
    if isinstance(x, QuadraticElement):
        if x.b == 0:
            return Polynomial(QQ, [-x.a, 1])
        return Polynomial(QQ, [x.a * x.a - x.b * x.b * x.D, -2 * x.a, 1])
    if isinstance(x, AlgebraicElement):
        if x.is_rational():
            return Polynomial(QQ, [-x.as_rational(), 1])
        ring = NumberFieldRing(x.field)
        lin = Polynomial(ring, [-x, x.field.one()])
        char = norm_poly(lin)
        return char.squarefree_part()
    raise DomainError("not an algebraic number")


def mahler_quadratic_exact(coeffs):
    """Exact Mahler measure of an integer quadratic a0 + a1 X + a2 X^2.

    Returns an mpq, or a QuadraticElement for the split-real case where one
    root lies inside and one outside the unit circle.
    """
    a0, a1, a2 = mpq(coeffs[0]), mpq(coeffs[1]), mpq(coeffs[2])
    lead = abs(a2)
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        # conjugate pair of modulus sqrt(|a0/a2|)
        return max(lead, abs(a0))
    r = sqrt_rational(disc)
    if r is not None:
        roots = [(-a1 + r) / (2 * a2), (-a1 - r) / (2 * a2)]
        m = lead
        for root in roots:
            m *= max(1, abs(root))
        return m
    from .intmath import squarefree_part
    d, c = squarefree_part(disc.numerator * disc.denominator)
    scale = mpq(c, disc.denominator)  # sqrt(disc) = scale * sqrt(d)
    m = mpq(lead)
    out = None
    for sgn in (1, -1):
        root = QuadraticElement(-a1 / (2 * a2), sgn * scale / (2 * a2), d)
        if root.sign() < 0:
            root = -root
        if (root - 1).sign() > 0:
            out = root if out is None else out * root
    if out is None:
        return m
    res = out * m
    return res.as_rational() if res.is_rational() else res


def mahler_numeric(int_coeffs, precision: int, target=ERROR_TARGET):
    """(value, rel_error) for the Mahler measure of an integer polynomial,
    via mpmath root isolation at the given precision in bits."""
    coeffs = [int(c) for c in reversed(int_coeffs)]
    n = len(coeffs) - 1
    with mp.workprec(max(precision, 53)):
        roots, err = mp.polyroots(coeffs, error=True, maxsteps=200,
                                  extraprec=precision)
        m = mp.mpf(abs(coeffs[0]))
        for r in roots:
            m *= max(mp.mpf(1), abs(r))
        rel = (mp.mpf(err) * 2 ** 6 + mp.mpf(2) ** (4 - precision)) * n
        return m, rel


def height_algebraic(x, precision: int = 128) -> Height:
    """Height via the Mahler measure of the minimal polynomial.

    Exact for degree <= 2; otherwise numeric with the relative error bound
    refined below ERROR_TARGET (PrecisionError if MAX_PRECISION is reached).
    """
    if isinstance(x, (AlgebraicElement, QuadraticElement)) and x.is_zero():
        return height_rational(0)
    if isinstance(x, (int, mpz, mpq)):
        return height_rational(x)
    minpoly = minimal_polynomial(x)
    ic = _primitive_int_coeffs(minpoly)
    d = len(ic) - 1
    if d == 1:
        return height_rational(mpq(-ic[0], ic[1]))
    if d == 2:
        m = mahler_quadratic_exact(ic)
        mf = _to_mpf(m) if isinstance(m, mpq) else _quad_to_mpf(m)
        return Height(degree=2, mahler_float=mf, error_bound=mpq(0), mahler_exact=m)
    prec = precision
    while prec <= MAX_PRECISION:
        value, rel = mahler_numeric(ic, prec)
        if rel < _to_mpf(ERROR_TARGET):
            return Height(degree=d, mahler_float=value, error_bound=rel)
        prec *= 2
    raise PrecisionError("could not certify the Mahler measure; raise precision")


# ---------------------------------------------------------------------------
# inequality harness
# ---------------------------------------------------------------------------

def _rand_rational(rng, max_coeff):
    num = rng.randint(-max_coeff, max_coeff)
    den = rng.randint(1, max_coeff)
    return mpq(num, den)


def _rand_poly(rng, max_deg, max_coeff, monic=False, min_deg=1):
    deg = rng.randint(min_deg, max_deg)
    cs = [mpq(rng.randint(-max_coeff, max_coeff)) for _ in range(deg)]
    lc = mpq(1) if monic else mpq(rng.choice([i for i in range(-max_coeff, max_coeff + 1) if i]))
    return Polynomial(QQ, cs + [lc])


def _record(lemma, instance, lhs, rhs, err=mpq(0)):
    """One report row; the inequality asserted is lhs <= rhs with the error
    margin charged against the favorable side."""
    lhs_f = lhs if isinstance(lhs, mp.mpf) else _to_mpf(lhs)
    rhs_f = rhs if isinstance(rhs, mp.mpf) else _to_mpf(rhs)
    err_f = err if isinstance(err, mp.mpf) else _to_mpf(err)
    if isinstance(lhs, mpq) and isinstance(rhs, mpq):
        status = "pass" if lhs <= rhs else "fail"
    else:
        safe = lhs_f * (1 - err_f) <= rhs_f
        tight = lhs_f * (1 + 2 * err_f) <= rhs_f
        status = "pass" if tight else ("indeterminate" if safe else "fail")
    return {
        "lemma": lemma,
        "instance": instance,
        "lhs": mp.nstr(lhs_f, 17),
        "rhs": mp.nstr(rhs_f, 17),
        "margin": mp.nstr(rhs_f - lhs_f, 17),
        "status": status,
    }


def verify_height_inequalities(trials: int, seed: int, max_deg: int = 6,
                               max_coeff: int = 20, factored: int = 50,
                               hat_trials: int = 25):
    """Deterministic random verification of the height inequalities.

    Derivative and evaluation bounds are checked exactly over Q; the
    factorization bound uses exact or certified-numeric root heights; the
    critical-value-polynomial bound is exact (both heights rational).
    A failure would falsify this implementation, not the inequalities.
    """
    from .engine import hat
    from .parsing import render_poly

    if trials < 1:
        raise DomainError("trials must be positive")
    rng = random.Random(seed)
    records = []

    for _ in range(trials):
        f = _rand_poly(rng, max_deg, max_coeff)
        n = f.degree
        hf = height_poly_q(f).value_rational()
        hdf = height_poly_q(f.derivative()).value_rational() if n >= 1 else mpq(1)
        records.append(_record("derivative_bound", render_poly(f), hdf, n * hf))

        x = _rand_rational(rng, max_coeff)
        hx = height_rational(x).value_rational()
        hfx = height_rational(f(x)).value_rational()
        records.append(_record("evaluation_bound", f"{render_poly(f)} at {x}",
                               hfx, (n + 1) * hf * hx ** n))

    for _ in range(factored):
        n_lin = rng.randint(0, 3)
        n_quad = rng.randint(0, 2)
        if n_lin + n_quad == 0:
            n_lin = 1
        c = mpq(rng.choice([i for i in range(-9, 10) if i]))
        f = Polynomial(QQ, [c])
        x_poly = Polynomial.x(QQ)
        prod_h = mp.mpf(1)
        prod_err = mp.mpf(0)
        for _ in range(n_lin):
            r = _rand_rational(rng, 9)
            f = f * (x_poly - Polynomial(QQ, [r]))
            prod_h *= _to_mpf(height_rational(r).mahler_exact)
        for _ in range(n_quad):
            b, c2 = rng.randint(-6, 6), rng.randint(-6, 6)
            quad = Polynomial(QQ, [mpq(c2), mpq(b), mpq(1)])
            f = f * quad
            m = mahler_quadratic_exact([mpq(c2), mpq(b), mpq(1)])
            prod_h *= _to_mpf(m) if isinstance(m, mpq) else _quad_to_mpf(m)
            prod_err += mp.mpf(2) ** (-40)
        n = f.degree
        hf = height_poly_q(f).value_rational()
        label = render_poly(f)
        records.append(_record("factorization_lower", label,
                               _to_mpf(mpq(1, 2 ** n)) * prod_h, _to_mpf(hf), prod_err))
        records.append(_record("factorization_upper", label,
                               _to_mpf(hf), _to_mpf(mpq(2 ** (n - 1))) * prod_h, prod_err))

    for _ in range(hat_trials):
        f = _rand_poly(rng, max(3, min(max_deg, 6)), 10, monic=True, min_deg=2)
        n = f.degree
        fh = hat(f)
        hf = height_poly_q(f).value_rational()
        hfh = height_poly_q(fh).value_rational()
        bound = mpq(2) ** (n * n) * mpq(n + 1) ** (2 * n) * hf ** (2 * n)
        records.append(_record("critical_value_bound", render_poly(f), hfh, bound))

    return records


def roy_thunder_check(K: NumberField):
    """Exact check of the basis-height bound for a quadratic field.

    Builds f0 = X + X^2 + omega X^3 + X^5 for the integral basis {1, omega};
    every coefficient vector contains 1, so max_i |a_i|_v = max(1, |omega|_v)
    at every place and H(f0) = H(omega). The assertion is
    H(omega) <= 2^7 |Delta|^(1/2), squared to an exact comparison
    M(omega) <= 2^14 |Delta|.
    """
    if K.degree != 2:
        raise DomainError("the check is implemented for quadratic fields")
    from .intmath import quadratic_discriminant
    from .parsing import render_quadratic

    omega = K.integral_basis_second()
    minpoly = minimal_polynomial(omega)
    ic = _primitive_int_coeffs(minpoly)
    m = mahler_quadratic_exact(ic)
    delta = quadratic_discriminant(K.radicand)
    bound = mpq(2 ** 14) * abs(delta)
    if isinstance(m, mpq):
        ok = m <= bound
        m_float = _to_mpf(m)
    else:
        ok = (m - bound).sign() <= 0
        m_float = _quad_to_mpf(m)
    h_omega = mp.sqrt(m_float)
    rhs = mp.mpf(2 ** 7) * mp.sqrt(_to_mpf(abs(delta)))
    return {
        "field_radicand": str(K.radicand),
        "discriminant": str(delta),
        "omega": render_quadratic(omega),
        "H_omega": mp.nstr(h_omega, 17),
        "bound": mp.nstr(rhs, 17),
        "status": "pass" if ok else "fail",
        "exact": True,
    }
