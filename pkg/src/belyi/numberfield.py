"""Exact number field arithmetic Q[alpha]/(m(alpha)) with a quadratic fast path.

Elements are vectors of rationals in the power basis 1, alpha, ..., alpha^(n-1).
Quadratic fields additionally expose the a + b*sqrt(D) form (QuadraticElement)
with D a squarefree radicand, plus the nontrivial Galois conjugate.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz
import gmpy2

from .intmath import (
    DomainError,
    factorize,
    is_square,
    isqrt,
    quadratic_discriminant,
    squarefree_part,
)


# ---------------------------------------------------------------------------
# small helpers on dense mpq coefficient lists (constant term first)
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _ldeg(c):
    return len(c) - 1


def _lmul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _ladd(a, b):
    out = [mpq(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += y
    return _trim(out)


def _lscale(a, s):
    return _trim([x * s for x in a])


def _ldivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        coef = a[-1] * inv
        shift = len(a) - len(b)
        q[shift] = coef
        for i, y in enumerate(b):
            a[shift + i] -= coef * y
        _trim(a)
    return _trim(q), a


def _lgcdext(a, b):
    """Extended gcd over Q[x]: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = list(a), list(b)
    u0, u1 = [mpq(1)], []
    v0, v1 = [], [mpq(1)]
    while r1:
        q, r = _ldivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _ladd(u0, _lscale(_lmul(q, u1), -1))
        v0, v1 = v1, _ladd(v0, _lscale(_lmul(q, v1), -1))
    return r0, u0, v0


def _lresultant(f, g):
    """Resultant of two mpq coefficient lists via the Euclidean recurrence."""
    if not f or not g:
        return mpq(0)
    res = mpq(1)
    while True:
        m, n = _ldeg(f), _ldeg(g)
        if n == 0:
            return res * g[0] ** m
        _, r = _ldivmod(f, g)
        if not r:
            return mpq(0)
        res *= mpq(-1) ** (m * n) * g[-1] ** (m - _ldeg(r))
        f, g = g, r


def _rational_roots(coeffs):
    """All rational roots of a nonzero mpq polynomial (list, ascending)."""
    c = list(coeffs)
    low = 0
    while c and c[0] == 0:
        c.pop(0)
        low += 1
    roots = set([mpq(0)] if low else [])
    if _ldeg(c) >= 1:
        den = mpz(1)
        for x in c:
            den = gmpy2.lcm(den, x.denominator)
        ic = [mpz(x * den) for x in c]
        a0, lc = abs(ic[0]), abs(ic[-1])
        p_divs = _divisors(a0)
        q_divs = _divisors(lc)
        for p in p_divs:
            for q in q_divs:
                for cand in (mpq(p, q), mpq(-p, q)):
                    if sum(x * cand ** i for i, x in enumerate(ic)) == 0:
                        roots.add(cand)
    return sorted(roots)


def _divisors(n):
    n = mpz(abs(n))
    if n == 0:
        return []
    divs = [mpz(1)]
    for p, e in factorize(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------

class NumberField:
    """Q[alpha]/(m(alpha)) for a monic irreducible m over Q.

    Irreducibility is verified for degree <= 4 (rational roots, plus the
    quadratic-resolvent test for quartics); above that the caller asserts it
    and only the rational-root sanity check runs.
    """

    def __init__(self, min_poly_coeffs):
        coeffs = [mpq(c) for c in min_poly_coeffs]
        _trim(coeffs)
        if _ldeg(coeffs) < 1:
            raise DomainError("minimal polynomial must be nonconstant")
        lc = coeffs[-1]
        if lc != 1:
            coeffs = [c / lc for c in coeffs]
        self.min_poly = tuple(coeffs)
        self.degree = _ldeg(coeffs)
        self._check_irreducible()
        # reductions of alpha^k for k = n .. 2n-2
        n = self.degree
        powers = []
        cur = [-c for c in coeffs[:-1]]  # alpha^n
        powers.append(list(cur))
        for _ in range(n - 2):
            cur = [mpq(0)] + cur
            if _ldeg(cur) >= n:
                top = cur.pop()
                cur = _ladd(cur, _lscale(list(coeffs[:-1]), -top))
            cur += [mpq(0)] * (n - len(cur))
            powers.append(list(cur))
        self._alpha_powers = [tuple(p + [mpq(0)] * (n - len(p))) for p in powers]
        self._quad = self._quadratic_data() if n == 2 else None

    def _check_irreducible(self):
        n = self.degree
        if n == 1:
            return
        if _rational_roots(list(self.min_poly)):
            raise DomainError("minimal polynomial has a rational root")
        if n != 4:
            return
        # quartic: exclude splitting into two rational quadratics via the
        # resolvent cubic of the depressed form y^4 + p y^2 + q y + r
        a3, a2, a1, a0 = (self.min_poly[3], self.min_poly[2],
                          self.min_poly[1], self.min_poly[0])
        s = a3 / 4
        p = a2 - 6 * s ** 2
        q = a1 - 2 * a2 * s + 8 * s ** 3
        r = a0 - a1 * s + a2 * s ** 2 - 3 * s ** 4
        if q == 0:
            # biquadratic y^4 + p y^2 + r: (y^2+v)(y^2+w) needs p^2 - 4r square;
            # (y^2+uy+v)(y^2-uy+v) needs v^2 = r and u^2 = 2v - p
            if _is_rational_square(p * p - 4 * r):
                raise DomainError("minimal polynomial splits into quadratics")
            if _is_rational_square(r):
                v = _sqrt_if_square(r)
                for vv in (v, -v):
                    if _is_rational_square(2 * vv - p):
                        raise DomainError("minimal polynomial splits into quadratics")
            return
        # z (p + z)^2 - 4 r z - q^2 = 0, z = u^2 a rational square
        cubic = [-q * q, p * p - 4 * r, 2 * p, mpq(1)]
        for z in _rational_roots(cubic):
            if z > 0 and _is_rational_square(z):
                raise DomainError("minimal polynomial splits into quadratics")

    def _quadratic_data(self):
        p, q = self.min_poly[1], self.min_poly[0]
        t = p * p - 4 * q  # alpha = (-p + sqrt(t)) / 2
        d, c = squarefree_part(t.numerator * t.denominator)
        # sqrt(t) = (c / den(t)) * sqrt(d)
        return {"radicand": mpz(d), "scale": mpq(c, t.denominator)}

    # -- constructors ------------------------------------------------------

    def element(self, coords) -> "AlgebraicElement":
        coords = [mpq(c) for c in coords]
        if len(coords) != self.degree:
            raise DomainError("coordinate vector has wrong length")
        return AlgebraicElement(self, tuple(coords))

    def from_rational(self, r) -> "AlgebraicElement":
        return self.element([mpq(r)] + [0] * (self.degree - 1))

    def gen(self) -> "AlgebraicElement":
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        return self.element([0, 1] + [0] * (self.degree - 2))

    def zero(self) -> "AlgebraicElement":
        return self.from_rational(0)

    def one(self) -> "AlgebraicElement":
        return self.from_rational(1)

    # -- invariants --------------------------------------------------------

    @property
    def radicand(self):
        """Squarefree d with K = Q(sqrt(d)); quadratic fields only."""
        if self.degree != 2:
            raise DomainError("radicand is defined for quadratic fields")
        return self._quad["radicand"]

    def discriminant_info(self):
        """(value, exact): the field discriminant for degree <= 2, else the
        discriminant of the primitive integer minimal polynomial with
        exact=False (its prime set is only an upper set for ramification)."""
        if self.degree == 1:
            return mpz(1), True
        if self.degree == 2:
            return quadratic_discriminant(self.radicand), True
        den = mpz(1)
        for c in self.min_poly:
            den = gmpy2.lcm(den, c.denominator)
        ic = [c * den for c in self.min_poly]
        g = ic[0].numerator
        for c in ic[1:]:
            g = gmpy2.gcd(g, c.numerator)
        ic = [mpq(c, g) for c in ic]
        n = self.degree
        deriv = [i * c for i, c in enumerate(ic)][1:]
        res = _lresultant(list(ic), deriv)
        disc = mpq(-1) ** (n * (n - 1) // 2) * res / ic[-1]
        return disc, False

    def integral_basis_second(self):
        """omega with {1, omega} an integral basis; quadratic fields only."""
        d = self.radicand
        if d % 4 == 1:
            return QuadraticElement(mpq(1, 2), mpq(1, 2), d)
        return QuadraticElement(0, 1, d)

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.min_poly]})"


def _is_rational_square(r) -> bool:
    r = mpq(r)
    return r >= 0 and is_square(r.numerator) and is_square(r.denominator)


def _sqrt_if_square(r):
    r = mpq(r)
    return mpq(isqrt(r.numerator), isqrt(r.denominator))


class AlgebraicElement:
    """An element of a NumberField in power-basis coordinates (immutable)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(mpq(c) for c in coords)

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AlgebraicElement):
            if other.field != self.field:
                raise DomainError("elements live in different fields")
            return other
        if isinstance(other, (int, mpz, mpq)):
            return self.field.from_rational(other)
        return NotImplemented

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return AlgebraicElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = self.field.degree
        prod = _lmul(list(self.coords), list(o.coords))
        out = list(prod[:n]) + [mpq(0)] * max(0, n - len(prod))
        for k in range(n, len(prod)):
            red = self.field._alpha_powers[k - n]
            c = prod[k]
            if c:
                for i in range(n):
                    out[i] += c * red[i]
        return AlgebraicElement(self.field, out[:n])

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        g, u, _ = _lgcdext(_trim(list(self.coords)), list(self.field.min_poly))
        if _ldeg(g) != 0:
            raise DomainError("minimal polynomial is not irreducible")
        inv = _lscale(u, 1 / g[0])
        _, inv = _ldivmod(inv, list(self.field.min_poly))
        inv += [mpq(0)] * (self.field.degree - len(inv))
        return AlgebraicElement(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_rational(self) -> mpq:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, mpz, mpq)):
            return self.is_rational() and self.coords[0] == other
        if isinstance(other, QuadraticElement):
            return other.__eq__(self)
        if not isinstance(other, AlgebraicElement):
            return NotImplemented
        if self.field == other.field:
            return self.coords == other.coords
        if self.field.degree == 2 and other.field.degree == 2:
            return self.to_quadratic()._key() == other.to_quadratic()._key()
        return self.is_rational() and other.is_rational() and \
            self.coords[0] == other.coords[0]

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        if self.field.degree == 2:
            return hash(self.to_quadratic()._key())
        return hash((self.field.min_poly, self.coords))

    # -- quadratic specifics --------------------------------------------------

    def conjugate(self) -> "AlgebraicElement":
        """Galois conjugate; quadratic fields only (alpha -> -p - alpha)."""
        if self.field.degree != 2:
            raise DomainError("general automorphisms are out of scope")
        p = self.field.min_poly[1]
        a, b = self.coords
        return AlgebraicElement(self.field, (a - b * p, -b))

    def to_quadratic(self) -> "QuadraticElement":
        if self.field.degree != 2:
            raise DomainError("not a quadratic field element")
        p = self.field.min_poly[1]
        q = self.field._quad
        a, b = self.coords
        return QuadraticElement(a - b * p / 2, b * q["scale"] / 2, q["radicand"])

    def __repr__(self):
        return f"AlgebraicElement({[str(c) for c in self.coords]})"


class QuadraticElement:
    """a + b*sqrt(D) with D squarefree, D != 0, 1; exact arithmetic."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        self.a = mpq(a)
        self.b = mpq(b)
        self.D = mpz(D)
        if self.D in (0, 1):
            raise DomainError("radicand must be squarefree and != 0, 1")

    def _key(self):
        if self.b == 0:
            return (self.a, mpq(0), mpz(0))
        return (self.a, self.b, self.D)

    def _pair(self, other):
        """Common-radicand view (a1, b1, a2, b2, D) of self and other."""
        if isinstance(other, QuadraticElement):
            if other.b != 0 and self.b != 0 and other.D != self.D:
                raise DomainError("radicands differ")
            D = self.D if self.b != 0 else other.D
            return self.a, self.b, other.a, other.b, D
        if isinstance(other, (int, mpz, mpq)):
            return self.a, self.b, mpq(other), mpq(0), self.D
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, D = p
        return QuadraticElement(a1 + a2, b1 + b2, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(-self.a, -self.b, self.D)

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, D = p
        return QuadraticElement(a1 - a2, b1 - b2, D)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, D = p
        return QuadraticElement(a1 * a2 + b1 * b2 * D, a1 * b2 + b1 * a2, D)

    __rmul__ = __mul__

    def norm(self) -> mpq:
        return self.a * self.a - self.b * self.b * self.D

    def conjugate(self) -> "QuadraticElement":
        return QuadraticElement(self.a, -self.b, self.D)

    def inverse(self) -> "QuadraticElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadraticElement(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, D = p
        return QuadraticElement(a1, b1, D) * QuadraticElement(a2, b2, D).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadraticElement(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_rational(self) -> mpq:
        if self.b != 0:
            raise DomainError("element is not rational")
        return self.a

    def sign(self) -> int:
        """Exact sign as a real number; requires D > 0 or a rational value."""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.D < 0:
            raise DomainError("sign of a non-real element")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 D
        return sa if self.a * self.a > self.b * self.b * self.D else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __eq__(self, other):
        if isinstance(other, (int, mpz, mpq)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticElement):
            return self._key() == other._key()
        if isinstance(other, AlgebraicElement):
            if other.field.degree != 2:
                return self.b == 0 and other.is_rational() and other.as_rational() == self.a
            return other.to_quadratic()._key() == self._key()
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash(self._key())

    def to_algebraic(self, field: NumberField) -> AlgebraicElement:
        if self.b == 0:
            return field.from_rational(self.a)
        if field.degree != 2 or field.radicand != self.D:
            raise DomainError("field does not contain this element")
        p = field.min_poly[1]
        scale = field._quad["scale"]
        x1 = self.b / scale * 2
        return field.element([self.a + x1 * p / 2, x1])

    def __repr__(self):
        return f"({self.a}+{self.b}*sqrt({self.D}))"

    def __str__(self):
        return f"{self.a}+{self.b}*sqrt({self.D})"


# ---------------------------------------------------------------------------
# module level operations
# ---------------------------------------------------------------------------

def nf_arith(op: str, x: AlgebraicElement, y: AlgebraicElement) -> AlgebraicElement:
    """Exact field arithmetic: op in {add, sub, mul, div}."""
    if x.field != y.field:
        raise DomainError("elements live in different fields")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise DomainError(f"unknown operation {op!r}")


def apply_automorphism(x):
    """The nontrivial Galois conjugate on a quadratic field element.

    Rationals (degree-1 elements) are fixed. Applying twice is the identity.
    """
    if isinstance(x, QuadraticElement):
        return x.conjugate()
    if isinstance(x, (int, mpz, mpq)):
        return mpq(x)
    if isinstance(x, AlgebraicElement):
        if x.field.degree == 1:
            return x
        return x.conjugate()
    raise DomainError("not a field element")


def sqrt_rational(r):
    """sqrt of a rational as an exact rational, or None."""
    r = mpq(r)
    if r < 0:
        return None
    if is_square(r.numerator) and is_square(r.denominator):
        return mpq(isqrt(r.numerator), isqrt(r.denominator))
    return None


def sqrt_in_quadratic(x, D):
    """Exact square root of x = e + f*sqrt(D) inside Q(sqrt(D)), or None.

    Accepts a rational or a QuadraticElement with radicand D.
    """
    D = mpz(D)
    if isinstance(x, QuadraticElement):
        if x.b != 0 and x.D != D:
            return None
        e, f = x.a, x.b
    else:
        e, f = mpq(x), mpq(0)
    if f == 0:
        r = sqrt_rational(e)
        if r is not None:
            return QuadraticElement(r, 0, D)
        t = sqrt_rational(e / D)
        if t is not None:
            return QuadraticElement(0, t, D)
        return None
    # (s + t sqrt(D))^2 = e + f sqrt(D): s^2 + t^2 D = e, 2 s t = f
    disc = e * e - f * f * D
    rd = sqrt_rational(disc)
    if rd is None:
        return None
    for s2 in ((e + rd) / 2, (e - rd) / 2):
        s = sqrt_rational(s2)
        if s is not None and s != 0:
            t = f / (2 * s)
            if s * s + t * t * D == e:
                return QuadraticElement(s, t, D)
    return None
