"""The three-factor family f = (1-X)^a (1-xX)^b (1-yX)^c of genus-0 dessins.

For integers a, b, c with abc(b+c) != 0 and a+b+c > 0, requiring the
logarithmic derivative df/f to have its unique zero at the origin pins x and
y in closed form inside Q(sqrt(-abc(a+b+c))). When the radicand is not a
perfect square the map is a Belyi map whose field of moduli is that quadratic
field, which yields explicit degree certificates for quadratic fields.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq, mpz

from .intmath import DomainError, is_prime, is_squarefree, squarefree_part
from .numberfield import NumberField, QuadraticElement
from .polynomials import (NumberFieldRing, Polynomial, QQ, RationalMap,
                          ring_over, rmap_normalize)
from .engine import (FactoredMap, critical_value_poly, moduli_field_quadratic,
                     root_set_within)


@dataclass(frozen=True)
class FamilyParams:
    """Exponent triple (a, b, c); the map's exponents at 1, 1/x, 1/y."""

    a: int
    b: int
    c: int

    def validate(self, require_distinct: bool = True):
        a, b, c = self.a, self.b, self.c
        if a * b * c * (b + c) == 0:
            raise DomainError("need abc(b+c) != 0")
        if a + b + c <= 0:
            raise DomainError("need a+b+c > 0")
        if require_distinct and len({a, b, c, a + b + c}) != 4:
            raise DomainError("a, b, c, a+b+c must be pairwise distinct")

    @property
    def delta(self) -> mpz:
        return mpz(-self.a * self.b * self.c * (self.a + self.b + self.c))

    @property
    def map_degree(self) -> int:
        pos = sum(e for e in (self.a, self.b, self.c) if e > 0)
        neg = -sum(e for e in (self.a, self.b, self.c) if e < 0)
        return max(pos, neg)


class QuadraticDessin:
    """A solved instance of the family: parameters, the points x and y, the
    field Q(sqrt(squarefree part of delta)), and the map in factored form."""

    def __init__(self, params: FamilyParams, x, y, field, degenerate: bool):
        self.params = params
        self.x = x
        self.y = y
        self.field = field          # NumberField, or None in the rational case
        self.degenerate = degenerate
        self.delta = params.delta
        self.sqfree_d = squarefree_part(self.delta)[0]
        self.degree = params.map_degree
        self.ring = ring_over(field)
        factors = []
        for z, e in ((mpq(1), params.a), (x, params.b), (y, params.c)):
            zz = self.ring.coerce(z)
            if self.ring.is_zero(zz):
                continue
            factors.append((self.ring.exact_div(self.ring.one, zz), e))
        scalar = self.ring.one
        for z, e in ((mpq(1), params.a), (x, params.b), (y, params.c)):
            zz = self.ring.coerce(z)
            if not self.ring.is_zero(zz):
                scalar = scalar * (-zz) ** e
        self.factored = FactoredMap(self.ring, scalar, factors)

    # -- representations -----------------------------------------------------

    def rational_map(self, max_degree: int = 512) -> RationalMap:
        return self.factored.to_rational_map(max_degree)

    def field_name(self) -> str:
        if self.field is None:
            return "Q"
        return f"Q(sqrt({self.field.radicand}))"

    def to_record(self) -> dict:
        from .parsing import render_quadratic
        return {
            "triple": [self.params.a, self.params.b, self.params.c],
            "delta": str(self.delta),
            "squarefree_part": str(self.sqfree_d),
            "field": self.field_name(),
            "degree": int(self.degree),
            "x": render_quadratic(self.x),
            "y": render_quadratic(self.y),
            "degenerate": self.degenerate,
        }

    def __repr__(self):
        t = self.params
        return f"QuadraticDessin(({t.a},{t.b},{t.c}), deg {self.degree}, {self.field_name()})"


def family_solve(a, b=None, c=None, require_distinct: bool = True) -> QuadraticDessin:
    """Solve the family equations for the exponent triple.

    x and y satisfy a + bx + cy = 0 and a + bx^2 + cy^2 = 0 (verified here
    exactly); a perfect-square delta gives the degenerate rational case.
    """
    params = a if isinstance(a, FamilyParams) else FamilyParams(int(a), int(b), int(c))
    params.validate(require_distinct=require_distinct)
    a, b, c = params.a, params.b, params.c
    delta = params.delta
    s, mconst = squarefree_part(delta)
    if s == 1:
        root = mpq(mconst)           # sqrt(delta), delta a perfect square
        x = mpq(-(a * b - root), b * (b + c))
        y = mpq(-(a * c + root), c * (b + c))
        field = None
        degenerate = True
    else:
        x = QuadraticElement(mpq(-a, b + c), mpq(mconst, b * (b + c)), s)
        y = QuadraticElement(mpq(-a, b + c), mpq(-mconst, c * (b + c)), s)
        field = NumberField([-mpq(s), 0, 1])
        degenerate = False
    e1 = a + b * x + c * y
    e2 = a + b * x * x + c * y * y
    ok1 = (e1 == 0) if isinstance(e1, mpq) else e1.is_zero()
    ok2 = (e2 == 0) if isinstance(e2, mpq) else e2.is_zero()
    if not (ok1 and ok2):
        raise AssertionError("closed-form solution fails the defining equations")
    if not degenerate:
        prods = [x, y, x - y, x - 1, y - 1]
        if any(p.is_zero() for p in prods):
            raise AssertionError("nondegeneracy xy(x-y)(x-1)(y-1) != 0 violated")
    return QuadraticDessin(params, x, y, field, degenerate)


def verify_log_derivative(d: QuadraticDessin) -> bool:
    """True iff the numerator of df/f is a nonzero constant times a pure
    power of X (here: exactly c2 X^2)."""
    ring = d.ring
    a, b, c = d.params.a, d.params.b, d.params.c
    x = ring.coerce(d.x)
    y = ring.coerce(d.y)
    one = ring.one
    xp = Polynomial.x(ring)
    lin = {
        "1": Polynomial(ring, [one, -one]),
        "x": Polynomial(ring, [one, -x]),
        "y": Polynomial(ring, [one, -y]),
    }
    num = (lin["x"] * lin["y"]).scale(ring.coerce(-a)) + \
        (lin["1"] * lin["y"]).scale(-ring.coerce(b) * x) + \
        (lin["1"] * lin["x"]).scale(-ring.coerce(c) * y)
    if num.is_zero():
        return False
    for i in range(num.degree):
        if not ring.is_zero(num.coeff(i)):
            return False
    return True


def belyi_certificate(d: QuadraticDessin, cross_check_degree: int = 12) -> dict:
    """Full verification record for a family dessin.

    Checks, all exact: the two defining equations (done at solve time), the
    logarithmic-derivative condition, the polynomial identity
    (P'Q - PQ') * D = P * Q * N tying the dense map to the factored data
    (which forces every critical value into {0, 1, infinity} given N = c2 X^2
    and the exponent bookkeeping), the field of moduli, and, at small degree,
    an independent critical-value polynomial computed by resultant.
    """
    ring = d.ring
    cert = {"triple": [d.params.a, d.params.b, d.params.c],
            "degree": int(d.degree), "field": d.field_name()}
    cert["log_derivative"] = verify_log_derivative(d)

    a, b, c = d.params.a, d.params.b, d.params.c
    one = ring.one
    x = ring.coerce(d.x)
    y = ring.coerce(d.y)
    lins = [(Polynomial(ring, [one, -one]), a),
            (Polynomial(ring, [one, -x]), b),
            (Polynomial(ring, [one, -y]), c)]
    P = Polynomial(ring, [one])
    Q = Polynomial(ring, [one])
    D = Polynomial(ring, [one])
    for lin, e in lins:
        D = D * lin
        if e > 0:
            P = P * lin ** e
        else:
            Q = Q * lin ** (-e)
    N = Polynomial(ring, [one]).scale(ring.zero)
    for i, (lin, e) in enumerate(lins):
        other = Polynomial(ring, [one])
        for j, (lin2, _) in enumerate(lins):
            if j != i:
                other = other * lin2
        z = [one, x, y][i]
        N = N + other.scale(-ring.coerce(e) * z)
    w = P.derivative() * Q - P * Q.derivative()
    cert["wronskian_identity"] = (w * D == P * Q * N)
    cert["unit_value_at_origin"] = ring.is_zero(P(ring.zero) - one) and \
        ring.is_zero(Q(ring.zero) - one)

    # exponent bookkeeping: with N = c2 X^2 verified, the critical values are
    # 1 (at the origin), 0 (multiple zeros), infinity (multiple poles and the
    # pole at infinity); nothing else
    exps = [a, b, c]
    cert["critical_values"] = sorted(
        {"1"} |
        ({"0"} if any(e >= 2 for e in exps) else set()) |
        ({"inf"} if (a + b + c >= 2 or any(e <= -2 for e in exps)) else set()))
    cert["belyi"] = cert["log_derivative"] and cert["wronskian_identity"] and \
        cert["unit_value_at_origin"]

    if d.degree <= cross_check_degree:
        rmap = d.rational_map()
        cv = critical_value_poly(rmap)
        targets = [ring.zero, ring.one]
        cert["critical_value_poly_roots_in_01"] = root_set_within(cv.poly, targets)
        cert["belyi"] = cert["belyi"] and cert["critical_value_poly_roots_in_01"]

    if d.degenerate or d.field is None:
        cert["moduli_field"] = "Q"
        cert["moduli_matches"] = d.field is None
    else:
        res = moduli_field_quadratic(d.factored,
                                     one_fiber_anchor=(ring.zero, 3))
        cert["moduli_field"] = "Q" if res == "Q" else f"Q(sqrt({res.radicand}))"
        cert["moduli_matches"] = res != "Q" and res.radicand == d.sqfree_d
    cert["verified"] = bool(cert["belyi"] and cert["moduli_matches"]) if not d.degenerate \
        else bool(cert["belyi"])
    return cert


# ---------------------------------------------------------------------------
# the constructions behind the quadratic-field degree bounds
# ---------------------------------------------------------------------------

def construct_prime(p) -> QuadraticDessin:
    """Degree-p dessin with field Q(sqrt(-p)) for a prime p > 7, p != 1 mod 12.

    p = 3n+2 uses (2, n, 2n); p = 4n+3 uses (3, n, 3n)."""
    p = mpz(p)
    if p <= 7 or not is_prime(p):
        raise DomainError("need a prime p > 7")
    if p % 12 == 1:
        raise DomainError("p = 1 mod 12 is outside the construction")
    if p % 3 == 2:
        n = (p - 2) // 3
        triple = FamilyParams(2, int(n), int(2 * n))
    else:
        n = (p - 3) // 4
        triple = FamilyParams(3, int(n), int(3 * n))
    d = family_solve(triple)
    if d.sqfree_d != -p:
        raise AssertionError("construction radicand is off")
    if d.degree != p:
        raise AssertionError("construction degree is off")
    return d


def construct_imaginary(d) -> QuadraticDessin:
    """Degree 2d+4 dessin with field Q(sqrt(-d)) via (2, d, d+2), d >= 5."""
    d = mpz(d)
    if d < 5:
        raise DomainError("small radicands are served by the family search")
    if not is_squarefree(d):
        raise DomainError("d must be squarefree")
    out = family_solve(FamilyParams(2, int(d), int(d + 2)))
    if out.sqfree_d != -d or out.degree != 2 * d + 4:
        raise AssertionError("imaginary construction is off")
    return out


def construct_real(d) -> QuadraticDessin:
    """Degree 2d-2 dessin with field Q(sqrt(d)) via (-2, d-2, d), d >= 5."""
    d = mpz(d)
    if d < 5:
        raise DomainError("small radicands are served by the family search")
    if not is_squarefree(d):
        raise DomainError("d must be squarefree")
    out = family_solve(FamilyParams(-2, int(d - 2), int(d)))
    if out.sqfree_d != d or out.degree != 2 * d - 2:
        raise AssertionError("real construction is off")
    return out


def search_family(D, max_degree: int, verify: bool = False):
    """All valid triples whose field is Q(sqrt(D)) and degree <= max_degree,
    sorted by (degree, a, b, c); deterministic."""
    D = mpz(D)
    if D in (0, 1):
        raise DomainError("D must define a quadratic field")
    found = []
    rng = range(-int(max_degree), int(max_degree) + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                if a * b * c == 0 or b + c == 0:
                    continue
                s = a + b + c
                if s <= 0 or len({a, b, c, s}) != 4:
                    continue
                pos = sum(e for e in (a, b, c) if e > 0)
                neg = -sum(e for e in (a, b, c) if e < 0)
                if max(pos, neg) > max_degree:
                    continue
                delta = -a * b * c * s
                if (delta < 0) != (D < 0):
                    continue
                if squarefree_part(delta)[0] != D:
                    continue
                dessin = family_solve(FamilyParams(a, b, c))
                if verify and not belyi_certificate(dessin)["verified"]:
                    continue
                found.append(dessin)
    found.sort(key=lambda t: (t.degree, t.params.a, t.params.b, t.params.c))
    return found
