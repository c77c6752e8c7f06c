"""Dense univariate polynomials and rational maps over Q and over number fields.

Coefficient rings are first-class so the Sylvester/Bareiss resultant can run
with entries that are themselves polynomials (the two-variable eliminations
behind the hat transform and critical-value computations).
"""

from __future__ import annotations

from gmpy2 import mpq, mpz
import gmpy2

from .intmath import DomainError
from .numberfield import AlgebraicElement, NumberField, QuadraticElement


# ---------------------------------------------------------------------------
# coefficient rings
# ---------------------------------------------------------------------------

class RationalRing:
    """The rationals as a coefficient ring (singleton QQ)."""

    is_field = True

    @property
    def zero(self):
        return mpq(0)

    @property
    def one(self):
        return mpq(1)

    def coerce(self, x):
        if isinstance(x, (int, mpz, mpq)):
            return mpq(x)
        if isinstance(x, (AlgebraicElement, QuadraticElement)) and x.is_rational():
            return mpq(x.as_rational())
        raise DomainError(f"cannot coerce {x!r} into Q")

    def is_zero(self, a):
        return a == 0

    def exact_div(self, a, b):
        return a / b

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalRing()


class NumberFieldRing:
    """A number field K as a coefficient ring."""

    is_field = True

    def __init__(self, field: NumberField):
        self.field = field

    @property
    def zero(self):
        return self.field.zero()

    @property
    def one(self):
        return self.field.one()

    def coerce(self, x):
        if isinstance(x, AlgebraicElement):
            if x.field != self.field:
                raise DomainError("element from a different field")
            return x
        if isinstance(x, QuadraticElement):
            return x.to_algebraic(self.field)
        if isinstance(x, (int, mpz, mpq)):
            return self.field.from_rational(x)
        raise DomainError(f"cannot coerce {x!r} into the field")

    def is_zero(self, a):
        return a.is_zero()

    def exact_div(self, a, b):
        return a / b

    def __eq__(self, other):
        return isinstance(other, NumberFieldRing) and self.field == other.field

    def __hash__(self):
        return hash(("NF", self.field.min_poly))

    def __repr__(self):
        return f"NumberFieldRing({self.field!r})"


class PolyRing:
    """Polynomials over a base ring, used as a coefficient ring themselves."""

    is_field = False

    def __init__(self, base):
        self.base = base

    @property
    def zero(self):
        return Polynomial(self.base, [])

    @property
    def one(self):
        return Polynomial(self.base, [self.base.one])

    def coerce(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self.base:
                raise DomainError("polynomial over a different ring")
            return x
        return Polynomial(self.base, [self.base.coerce(x)])

    def is_zero(self, a):
        return a.is_zero()

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if not r.is_zero():
            raise DomainError("inexact polynomial division in resultant")
        return q

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.base == other.base

    def __hash__(self):
        return hash(("Poly", self.base))


def ring_over(field: NumberField | None):
    return QQ if field is None else NumberFieldRing(field)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """Dense univariate polynomial; coeffs[i] multiplies X^i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        cs = [ring.coerce(c) for c in coeffs]
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, ring, cs):
        self = object.__new__(cls)
        self.ring = ring
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        return self

    @classmethod
    def x(cls, ring):
        return cls(ring, [ring.zero, ring.one])

    @classmethod
    def constant(cls, ring, c):
        return cls(ring, [c])

    @classmethod
    def from_roots(cls, ring, roots):
        out = cls(ring, [ring.one])
        x = cls.x(ring)
        for r in roots:
            out = out * (x - cls(ring, [r]))
        return out

    # -- structure -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        if self.is_zero():
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else self.ring.zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def is_monic(self) -> bool:
        return not self.is_zero() and self.ring.is_zero(self.lc() - self.ring.one)

    # -- arithmetic ------------------------------------------------------------

    def _same(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise DomainError("polynomials over different rings")
            return other
        try:
            return Polynomial(self.ring, [self.ring.coerce(other)])
        except DomainError:
            return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Polynomial._raw(self.ring, [])
        a, b = self.coeffs, o.coeffs
        out = [self.ring.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not self.ring.is_zero(x):
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative polynomial power")
        out = Polynomial(self.ring, [self.ring.one])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if not o.ring.is_field and o.degree > 0:
            raise DomainError("division only over field coefficients")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return Polynomial._raw(self.ring, []), self
        quo = [self.ring.zero] * (dq + 1)
        inv_lc = None
        while len(rem) >= len(o.coeffs) and rem:
            if inv_lc is None:
                inv_lc = self.ring.exact_div(self.ring.one, o.lc())
            c = rem[-1] * inv_lc
            shift = len(rem) - len(o.coeffs)
            quo[shift] = c
            for i, y in enumerate(o.coeffs):
                rem[shift + i] = rem[shift + i] - c * y
            while rem and self.ring.is_zero(rem[-1]):
                rem.pop()
        return Polynomial._raw(self.ring, quo), Polynomial._raw(self.ring, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def scale(self, s):
        s = self.ring.coerce(s)
        return Polynomial._raw(self.ring, [c * s for c in self.coeffs])

    def monic(self):
        if self.is_zero():
            raise DomainError("cannot normalize the zero polynomial")
        return self.scale(self.ring.exact_div(self.ring.one, self.lc()))

    # -- calculus and evaluation -------------------------------------------------

    def derivative(self) -> "Polynomial":
        return Polynomial._raw(self.ring, [i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; x may be any object with compatible arithmetic."""
        if not self.coeffs:
            return self.ring.zero if not isinstance(x, Polynomial) else x.ring.zero
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def compose(self, g: "Polynomial") -> "Polynomial":
        if g.ring != self.ring:
            raise DomainError("composition requires a common ring")
        acc = Polynomial(self.ring, [])
        for c in reversed(self.coeffs):
            acc = acc * g + Polynomial(self.ring, [c])
        return acc

    # -- gcd machinery --------------------------------------------------------------

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd over a coefficient field."""
        if not self.ring.is_field:
            raise DomainError("gcd requires field coefficients")
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if a.is_zero():
            return a
        return a.monic()

    def squarefree_part(self) -> "Polynomial":
        """Monic product of the distinct irreducible factors."""
        if self.is_zero():
            raise DomainError("zero polynomial")
        if self.degree == 0:
            return Polynomial(self.ring, [self.ring.one])
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (squarefree factor, multiplicity)."""
        if self.is_zero():
            raise DomainError("zero polynomial")
        f = self.monic()
        out = []
        if f.degree == 0:
            return out
        d = f.derivative()
        a = f.gcd(d)
        b = f // a
        c = d // a - b.derivative()
        i = 1
        while b.degree > 0:
            p = b.gcd(c)
            if p.degree > 0:
                out.append((p, i))
            b = b // p
            c = c // p - b.derivative()
            i += 1
        return out

    def num_distinct_roots_bound(self) -> int:
        return self.squarefree_part().degree

    # -- conversions -----------------------------------------------------------------

    def map_coefficients(self, fn, new_ring) -> "Polynomial":
        return Polynomial(new_ring, [fn(c) for c in self.coeffs])

    def to_field(self, field: NumberField) -> "Polynomial":
        ring = NumberFieldRing(field)
        return Polynomial(ring, [ring.coerce(c) for c in self.coeffs])

    def rational_content_primitive(self):
        """(content, primitive): f = content * primitive with primitive having
        coprime integer data and positive leading rational content removed.

        Over Q the primitive part has coprime integer coefficients with lc > 0.
        Over K the rational content of all coordinates is pulled out.
        """
        if self.is_zero():
            raise DomainError("zero polynomial has no content")
        nums = []
        dens = []
        for c in self.coeffs:
            rats = [c] if isinstance(c, mpq) else list(c.coords)
            for r in rats:
                if r != 0:
                    nums.append(r.numerator)
                    dens.append(r.denominator)
        g = mpz(0)
        for x in nums:
            g = gmpy2.gcd(g, x)
        l = mpz(1)
        for x in dens:
            l = gmpy2.lcm(l, x)
        content = mpq(g, l)
        if isinstance(self.coeffs[-1], mpq):
            if self.coeffs[-1] < 0:
                content = -content
        prim = self.scale(self.ring.coerce(1 / content))
        return content, prim

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        from .parsing import render_poly
        return f"Polynomial({render_poly(self)!r})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def derivative(f: Polynomial) -> Polynomial:
    return f.derivative()


def compose(f, g: Polynomial):
    """(f o g); f may be a Polynomial or a RationalMap, g a Polynomial."""
    if isinstance(f, RationalMap):
        return rmap_normalize(f.num.compose(g), f.den.compose(g))
    return f.compose(g)


def resultant(f: Polynomial, g: Polynomial):
    """Sylvester resultant via fraction-free (Bareiss) elimination.

    Works over any coefficient ring with exact division, in particular with
    polynomial entries (two-variable elimination).
    """
    if f.ring != g.ring:
        raise DomainError("resultant requires a common ring")
    ring = f.ring
    if f.is_zero() and g.is_zero():
        raise DomainError("resultant of two zero polynomials")
    if f.is_zero() or g.is_zero():
        return ring.zero
    m, n = f.degree, g.degree
    if m == 0:
        return f.coeffs[0] ** n
    if n == 0:
        return g.coeffs[0] ** m
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([ring.zero] * i + fc + [ring.zero] * (n - 1 - i))
    for i in range(m):
        rows.append([ring.zero] * i + gc + [ring.zero] * (m - 1 - i))
    # Bareiss elimination
    sign = 1
    prev = ring.one
    for k in range(size - 1):
        if ring.is_zero(rows[k][k]):
            pivot = next((i for i in range(k + 1, size)
                          if not ring.is_zero(rows[i][k])), None)
            if pivot is None:
                return ring.zero
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, size):
            rik = rows[i][k]
            row_i = rows[i]
            row_k = rows[k]
            for j in range(k + 1, size):
                row_i[j] = ring.exact_div(row_i[j] * pk - rik * row_k[j], prev)
            row_i[k] = ring.zero
        prev = pk
    det = rows[size - 1][size - 1]
    return det if sign == 1 else -det


def norm_poly(f: Polynomial) -> Polynomial:
    """Coefficientwise field norm: the product of the conjugates of f.

    For f over a number field K of degree n, returns prod_sigma sigma(f) in
    Q[X], of degree n*deg(f); monic input gives monic output. Over Q this is
    the identity.
    """
    if f.is_zero():
        raise DomainError("norm of the zero polynomial")
    if f.ring == QQ:
        return f
    if not isinstance(f.ring, NumberFieldRing):
        raise DomainError("norm_poly needs a number field polynomial")
    field = f.ring.field
    n = field.degree
    if n == 1:
        r = -field.min_poly[0]
        return Polynomial(QQ, [_eval_coords(c.coords, r) for c in f.coeffs])
    pring = PolyRing(QQ)
    # minimal polynomial, coefficients lifted to constant polynomials in X
    a = Polynomial(pring, [Polynomial(QQ, [c]) for c in field.min_poly])
    # f transposed: polynomial in alpha whose coefficients are polynomials in X
    cols = []
    for j in range(n):
        cols.append(Polynomial(QQ, [c.coords[j] for c in f.coeffs]))
    b = Polynomial(pring, cols)
    res = resultant(a, b)
    return res


def _eval_coords(coords, r):
    acc = mpq(0)
    for c in reversed(coords):
        acc = acc * r + c
    return acc


def decompose(f: Polynomial, d: int):
    """Find (g, h) with f = g o h, h monic of degree d and h(0) = 0.

    The coefficients of h are read off the top coefficients of f one at a
    time, then g is obtained from the h-adic digit expansion of f. Returns
    None if no such factorization exists (it is unique when it does).
    """
    if f.is_constant():
        raise DomainError("cannot decompose a constant")
    ring = f.ring
    n = f.degree
    if d <= 0 or n % d != 0:
        raise DomainError("d must be a positive divisor of deg(f)")
    q = n // d
    lc = f.lc()
    x = Polynomial.x(ring)
    h = x ** d
    for j in range(1, d):
        target = ring.exact_div(f.coeff(n - j), lc)
        defect = target - (h ** q).coeff(n - j)
        coeff = ring.exact_div(defect, ring.coerce(q))
        h = h + Polynomial(ring, [ring.zero] * (d - j) + [coeff])
    # h-adic digits of f must all be constants
    digits = []
    cur = f
    for _ in range(q + 1):
        cur, r = divmod(cur, h)
        if r.degree > 0:
            return None
        digits.append(r.constant_term())
    if not cur.is_zero():
        return None
    g = Polynomial(ring, digits)
    return g, h


def affine_relate(h1: Polynomial, h2: Polynomial):
    """(a, b) with h2 = a*h1 + b, or None; degrees must match and be >= 1."""
    if h1.degree != h2.degree:
        raise DomainError("degree mismatch")
    if h1.degree < 1:
        raise DomainError("constant polynomials carry no affine relation")
    ring = h1.ring
    a = ring.exact_div(h2.lc(), h1.lc())
    diff = h2 - h1.scale(a)
    if diff.degree > 0:
        return None
    return a, diff.constant_term()


class RationalMap:
    """num/den with num, den coprime and den monic (den nonzero)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, normalized=False):
        if not normalized:
            raise DomainError("use rmap_normalize to build rational maps")
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, x):
        nv = self.num(x)
        dv = self.den(x)
        if isinstance(dv, (mpq, mpz, int)):
            if dv == 0:
                return INFINITY
        elif dv.is_zero():
            return INFINITY
        return nv / dv

    def wronskian(self) -> Polynomial:
        """num' * den - num * den', the numerator of the derivative."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def minus_one(self) -> "RationalMap":
        return rmap_normalize(self.num - self.den, self.den)

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalMap({self.num!r}, {self.den!r})"


class _Infinity:
    """The point at infinity on the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("projective-infinity")


INFINITY = _Infinity()


def rmap_normalize(num: Polynomial, den: Polynomial) -> RationalMap:
    """Cancel the gcd and rescale so the denominator is monic."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.ring != den.ring:
        raise DomainError("numerator and denominator over different rings")
    if num.is_zero():
        one = Polynomial(num.ring, [num.ring.one])
        return RationalMap(num, one, normalized=True)
    g = num.gcd(den)
    if g.degree > 0:
        num = num // g
        den = den // g
    inv = num.ring.exact_div(num.ring.one, den.lc())
    return RationalMap(num.scale(inv), den.scale(inv), normalized=True)
