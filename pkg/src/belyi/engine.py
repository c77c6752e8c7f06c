"""Hat transform, critical values, the unramified-outside-three-points
pipeline, and cover isomorphism checks.

Compositions are never expanded: a chain of stages carries its tracked
critical-value sets, and ramification claims are certified through that
bookkeeping exactly as the chain rule dictates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from gmpy2 import mpq, mpz
import gmpy2

from .intmath import DomainError
from .numberfield import (AlgebraicElement, NumberField, QuadraticElement,
                          apply_automorphism, sqrt_in_quadratic)
from .polynomials import (INFINITY, NumberFieldRing, PolyRing, Polynomial, QQ,
                          RationalMap, norm_poly, resultant, ring_over,
                          rmap_normalize)


# ---------------------------------------------------------------------------
# the hat transform
# ---------------------------------------------------------------------------

def hat(f: Polynomial, method: str = "auto") -> Polynomial:
    """Monic polynomial of degree n-1 whose roots are the critical values
    f(y_i) over the roots y_i of f' (with multiplicity).

    Defined through Res_Y(X - f(Y), f'(Y)) normalized to be monic; a power-sum
    evaluation of the same resultant is used for large inputs (identical
    output, verified in the test suite).
    """
    if f.is_zero() or not f.is_monic():
        raise DomainError("hat requires a monic polynomial")
    n = f.degree
    if n < 2:
        raise DomainError("hat requires degree >= 2")
    if method == "auto":
        method = "resultant" if (n <= 6 and _max_bits(f) <= 2000) else "power_sums"
    if method == "resultant":
        out = _hat_resultant(f)
    elif method == "power_sums":
        out = _hat_power_sums(f)
    else:
        raise DomainError(f"unknown hat method {method!r}")
    if out.degree != n - 1:
        raise AssertionError("hat degree invariant violated")
    return out


def _max_bits(f: Polynomial) -> int:
    bits = 0
    for c in f.coeffs:
        rats = [c] if isinstance(c, mpq) else list(c.coords)
        for r in rats:
            bits = max(bits, r.numerator.bit_length(), r.denominator.bit_length())
    return bits


def _hat_resultant(f: Polynomial) -> Polynomial:
    ring = f.ring
    pring = PolyRing(ring)
    x_in_coeff = Polynomial.x(ring)
    coeffs = [Polynomial(ring, [-f.coeff(0)]) + x_in_coeff]
    coeffs += [Polynomial(ring, [-f.coeff(i)]) for i in range(1, f.degree + 1)]
    a = Polynomial(pring, coeffs)          # X - f(Y), as a polynomial in Y
    b = Polynomial(pring, [Polynomial(ring, [c]) for c in f.derivative().coeffs])
    res = resultant(a, b)
    return res.monic()


def _hat_power_sums(f: Polynomial) -> Polynomial:
    ring = f.ring
    n = f.degree
    w = f.derivative().monic()
    m = n - 1
    # power sums of the roots of w via Newton's identities
    s = [ring.coerce(m)]
    for k in range(1, m):
        acc = ring.coerce(k) * w.coeff(m - k)
        for j in range(1, k):
            acc = acc + w.coeff(m - j) * s[k - j]
        s.append(-acc)
    # power sums of the critical values: p_k = sum_i (f^k mod w)(y_i)
    p = []
    t = Polynomial(ring, [ring.one])
    for _ in range(m):
        t = (t * f) % w
        acc = ring.zero
        for j in range(t.degree + 1):
            acc = acc + t.coeff(j) * s[j]
        p.append(acc)
    # elementary symmetric functions from power sums
    e = [ring.one]
    for k in range(1, m + 1):
        acc = ring.zero
        sign = ring.one
        for i in range(1, k + 1):
            acc = acc + sign * e[k - i] * p[i - 1]
            sign = -sign
        e.append(ring.exact_div(acc, ring.coerce(k)))
    out = [None] * (m + 1)
    sign = ring.one
    for k in range(m + 1):
        out[m - k] = sign * e[k]
        sign = -sign
    return Polynomial(ring, out)


# ---------------------------------------------------------------------------
# critical values
# ---------------------------------------------------------------------------

@dataclass
class CriticalValues:
    """Finite critical values as the root set of `poly` (in T), with the
    behavior at and over infinity reported separately."""

    poly: Polynomial
    infinity_is_critical_value: bool
    value_at_infinity: object
    infinity_multiplicity: int
    map_degree: int


def critical_value_poly(f) -> CriticalValues:
    """Polynomial (in T) whose root set is the finite critical values of f,
    computed as Res_Y(num(Y) - T den(Y), num' den - num den')."""
    if isinstance(f, Polynomial):
        f = rmap_normalize(f, Polynomial(f.ring, [f.ring.one]))
    if f.degree < 2:
        raise DomainError("critical values need a map of degree >= 2")
    ring = f.ring
    w = f.wronskian()
    if w.is_zero():
        raise DomainError("constant map")
    pring = PolyRing(ring)
    deg = max(f.num.degree, f.den.degree)
    coeffs = []
    for i in range(deg + 1):
        coeffs.append(Polynomial(ring, [f.num.coeff(i), -f.den.coeff(i)]))
    a = Polynomial(pring, coeffs)
    b = Polynomial(pring, [Polynomial(ring, [c]) for c in w.coeffs])
    res = resultant(a, b)
    if res.is_zero():
        raise AssertionError("degenerate critical value resultant")
    # behavior at infinity
    dn, dd = f.num.degree, f.den.degree
    if dn > dd:
        value_inf, mult_inf = INFINITY, dn - dd
    elif dn < dd:
        value_inf, mult_inf = ring.zero, dd - dn
    else:
        c = ring.exact_div(f.num.lc(), f.den.lc())
        diff = f.num - f.den.scale(c)
        mult_inf = dn - diff.degree
        value_inf = c
    # multiple poles send their critical value to infinity
    pole_critical = f.den.degree > 0 and f.den.gcd(f.den.derivative()).degree > 0
    inf_critical = pole_critical or (value_inf is INFINITY and mult_inf >= 2)
    return CriticalValues(
        poly=res,
        infinity_is_critical_value=inf_critical,
        value_at_infinity=value_inf,
        infinity_multiplicity=mult_inf,
        map_degree=f.degree,
    )


def root_set_within(poly: Polynomial, targets) -> bool:
    """Exactly decide whether every root of poly lies in the given finite set
    of ring values (divide out each linear factor to exhaustion)."""
    if poly.is_zero():
        raise DomainError("zero polynomial has every point as a root")
    ring = poly.ring
    rem = poly
    x = Polynomial.x(ring)
    for t in targets:
        lin = x - Polynomial(ring, [ring.coerce(t)])
        while rem.degree > 0:
            q, r = divmod(rem, lin)
            if not r.is_zero():
                break
            rem = q
    return rem.degree == 0


# ---------------------------------------------------------------------------
# point sets and chains
# ---------------------------------------------------------------------------

class PointSet:
    """A finite set of projective points: explicit rationals (or quadratic
    elements), optionally the point at infinity, plus "locus" polynomials
    standing for their full root sets (used while intermediate critical
    values are algebraic of high degree)."""

    def __init__(self, rationals=(), has_infinity=False, loci=()):
        pts = []
        for p in rationals:
            if isinstance(p, (int, mpz)):
                p = mpq(p)
            if p not in pts:
                pts.append(p)
        self.points = tuple(pts)
        self.has_infinity = bool(has_infinity)
        self.loci = tuple(loci)

    def cardinality(self) -> int:
        card = len(self.points) + (1 if self.has_infinity else 0)
        for locus in self.loci:
            distinct = locus.squarefree_part()
            card += distinct.degree
            for p in self.points:
                if distinct.ring.is_zero(distinct(distinct.ring.coerce(p))):
                    card -= 1
        return card

    def is_explicit(self) -> bool:
        return not self.loci

    def members(self):
        if self.loci:
            raise DomainError("point set has non-explicit algebraic members")
        out = list(self.points)
        if self.has_infinity:
            out.append(INFINITY)
        return out

    def __repr__(self):
        extra = f"+{len(self.loci)} loci" if self.loci else ""
        return f"PointSet({len(self.points)} pts, inf={self.has_infinity}{extra})"


@dataclass
class Stage:
    """One stage of a composition chain."""

    kind: str          # "poly" | "affine" | "consume"
    payload: object    # Polynomial, (scale, shift), or (m, n)
    degree: object
    s_set: PointSet | None = None

    def critical_values(self):
        if self.kind == "affine":
            return []
        if self.kind == "consume":
            return [mpq(0), mpq(1), INFINITY]
        raise DomainError("critical values of a generic stage are tracked by the chain")


@dataclass
class CompositionChain:
    """g = stage_k o ... o stage_0 kept unexpanded, with tracked S-sets."""

    stages: list
    base_field: NumberField | None = None

    @property
    def total_degree(self):
        deg = mpz(1)
        for st in self.stages:
            deg *= mpz(st.degree)
        return deg

    def final_s_set(self) -> PointSet:
        for st in reversed(self.stages):
            if st.s_set is not None:
                return st.s_set
        raise DomainError("chain carries no tracked point set")


# ---------------------------------------------------------------------------
# the upper-bound pipeline
# ---------------------------------------------------------------------------

def pipeline_init(K: NumberField | None, basis=None) -> Polynomial:
    """The starting polynomial X + X^2 + x_2 X^3 + ... + x_n X^(n+1) + X^(n+3)
    for a Q-basis 1, x_2, ..., x_n of K."""
    n = 1 if K is None else K.degree
    ring = ring_over(K if n > 1 else None)
    if basis is None:
        if n == 1:
            basis = [mpq(1)]
        elif n == 2:
            basis = [K.one(), K.integral_basis_second().to_algebraic(K)]
        else:
            basis = [K.gen() ** i for i in range(n)]
    basis = list(basis)
    if len(basis) != n:
        raise DomainError(f"basis must have {n} entries")
    first = basis[0]
    first_is_one = (first == 1) if isinstance(first, (int, mpz, mpq)) else \
        (first.is_rational() and first.as_rational() == 1)
    if not first_is_one:
        raise DomainError("basis must start with 1")
    if n > 1:
        mat = [list(ring.coerce(b).coords) for b in basis]
        if _det_rational(mat) == 0:
            raise DomainError("basis entries are linearly dependent")
    coeffs = [ring.zero, ring.one, ring.one]
    for i in range(1, n):
        coeffs.append(ring.coerce(basis[i]))
    coeffs.append(ring.zero)
    coeffs.append(ring.one)
    f0 = Polynomial(ring, coeffs)
    assert f0.degree == n + 3 and ring.is_zero(f0.coeff(n + 2))
    return f0


def _det_rational(mat) -> mpq:
    m = [row[:] for row in mat]
    size = len(m)
    det = mpq(1)
    for k in range(size):
        pivot = next((i for i in range(k, size) if m[i][k] != 0), None)
        if pivot is None:
            return mpq(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, size):
            factor = m[i][k] * inv
            for j in range(k, size):
                m[i][j] -= factor * m[k][j]
    return det


def pipeline_run(K: NumberField | None, basis=None, hat_method: str = "auto"):
    """Run the full degree-lowering recursion; returns (chain, report).

    Stage 0 is f0 over K; stage 1 is the coefficientwise norm of the critical
    value polynomial of f0; afterwards each stage is the hat of the previous
    one until degree 1. The tracked set S_m consists of infinity, the roots
    of the next stage, and the rational orbit points; its cardinality never
    exceeds (n+1)^2 + 1 and the final set is explicit and rational.
    """
    n = 1 if K is None else K.degree
    bound = (n + 1) ** 2 + 1
    f0 = pipeline_init(K, basis)
    hat0 = hat(f0, hat_method)
    f1 = norm_poly(hat0)
    if f1.degree != n * (n + 2):
        raise AssertionError("norm stage degree is off")

    fs = [f1]
    while fs[-1].degree >= 2:
        fs.append(hat(fs[-1], hat_method))
    for m, fm in enumerate(fs, start=1):
        if fm.degree != n * (n + 2) - m + 1:
            raise AssertionError("stage degree recursion is off")

    stages = []
    s0_card = 1 + hat0.squarefree_part().degree
    stages.append(Stage("poly", f0, f0.degree,
                        PointSet(has_infinity=True, loci=(hat0,))))
    report_stages = [{
        "m": 0, "degree": int(f0.degree), "height_bits": None,
        "s_card": s0_card, "s_card_bound": bound, "s_card_ok": s0_card <= bound,
    }]

    from .heights import height_poly_q

    orbit = []
    for idx, fm in enumerate(fs):
        m = idx + 1
        orbit = [mpq(0)] + [fm(r) for r in orbit]
        orbit = list(dict.fromkeys(orbit))
        hm = height_poly_q(fm).value_rational()
        if idx + 1 < len(fs):
            fnext = fs[idx + 1]
            distinct = fnext.squarefree_part().degree
            extra = sum(1 for r in orbit if fnext(r) != 0)
            card = 1 + distinct + extra
            sset = PointSet(rationals=orbit, has_infinity=True, loci=(fnext,))
        else:
            card = 1 + len(orbit)
            sset = PointSet(rationals=orbit, has_infinity=True)
        stages.append(Stage("poly", fm, fm.degree, sset))
        hbits = int(hm.numerator.bit_length())
        report_stages.append({
            "m": m, "degree": int(fm.degree),
            "height_bits": hbits,
            "height": str(hm) if hbits <= 128 else None,
            "s_card": card, "s_card_bound": bound, "s_card_ok": card <= bound,
        })

    final = PointSet(rationals=orbit, has_infinity=True)
    chain = CompositionChain(stages=stages, base_field=K)
    report = {
        "n": n,
        "field_minpoly": None if K is None else [str(c) for c in K.min_poly],
        "stage_count": len(stages),
        "chain_degree": str(chain.total_degree),
        "stages": report_stages,
        "final_set_rational": final.is_explicit(),
        "final_set_size": final.cardinality(),
        "all_cards_bounded": all(s["s_card_ok"] for s in report_stages),
    }
    return chain, report


# ---------------------------------------------------------------------------
# reduction of a rational critical-value set into {0, 1, infinity}
# ---------------------------------------------------------------------------

class ReductionInfeasibleError(RuntimeError):
    """Exact evaluation through a consumption stage would exceed the bit
    budget (the stage exponents are astronomically large)."""


DEFAULT_REDUCTION_BUDGET_BITS = 2_000_000


def litcanu_reduce(points, budget_bits: int = DEFAULT_REDUCTION_BUDGET_BITS) -> CompositionChain:
    """Compose maps with critical values inside the tracked set until the
    image of the given rational point set lies in {0, 1, infinity}.

    Step one normalizes all finite points into [0, 1] by the affine map
    through the extreme points. Afterwards each interior point a/b (lowest
    terms, 0 < a < b) is consumed by b^b/(a^a (b-a)^(b-a)) X^a (1-X)^(b-a),
    which sends it to 1, both 0 and 1 to 0, fixes infinity, and has all its
    critical values in {0, 1, infinity}; every step strictly shrinks the set
    of points outside {0, 1, infinity}. Consumption stages are kept in
    (m, n)-exponent form and never expanded.
    """
    if isinstance(points, PointSet):
        pts = points.members()
    else:
        pts = list(points)
    finite = []
    for p in pts:
        if p is INFINITY:
            continue
        if isinstance(p, (int, mpz)):
            p = mpq(p)
        if not isinstance(p, mpq):
            raise DomainError("reduction needs rational points")
        finite.append(p)
    finite = sorted(set(finite))

    stages = []
    current = finite
    if current and not set(current) <= {mpq(0), mpq(1)}:
        if len(current) == 1:
            shift = -current[0]
            if shift != 0:
                current = [mpq(0)]
                stages.append(Stage("affine", (mpq(1), shift), 1))
        else:
            lo, hi = current[0], current[-1]
            if (lo, hi) != (mpq(0), mpq(1)):
                scale = 1 / (hi - lo)
                shift = -lo * scale
                current = [p * scale + shift for p in current]
                stages.append(Stage("affine", (scale, shift), 1))

    def record_set(st):
        st.s_set = PointSet(rationals=current, has_infinity=True)
        return st

    if stages:
        record_set(stages[-1])

    while True:
        interior = [p for p in current if 0 < p < 1]
        if not interior:
            break
        interior.sort(key=lambda p: (p.denominator, p))
        target = interior[0]
        m = mpz(target.numerator)
        nn = mpz(target.denominator - target.numerator)
        total = m + nn
        survivors = []
        for q in current:
            if q in (mpq(0), mpq(1)) or q == target:
                continue
            qbits = max(q.numerator.bit_length(), q.denominator.bit_length())
            cost = int(total) if total < 2 ** 63 else None
            est = (cost * (qbits + max(1, int(total).bit_length()))) if cost else None
            if est is None or est > budget_bits:
                raise ReductionInfeasibleError(
                    f"consuming {_short(target)} needs a degree-{_short_int(total)} "
                    f"stage; pushing {_short(q)} through it requires about "
                    f"{est if est is not None else 'astronomically many'} bits "
                    f"(budget {budget_bits})")
            c = mpq(total) ** int(total) / (mpq(m) ** int(m) * mpq(nn) ** int(nn))
            val = c * q ** int(m) * (1 - q) ** int(nn)
            survivors.append(val)
        current = sorted(set([mpq(0), mpq(1)] + survivors))
        stages.append(record_set(Stage("consume", (m, nn), total)))

    if not stages:
        ring = QQ
        ident = Stage("poly", Polynomial.x(QQ), 1,
                      PointSet(rationals=current, has_infinity=True))
        stages.append(ident)
    final = stages[-1].s_set or PointSet(rationals=current, has_infinity=True)
    if not set(final.points) <= {mpq(0), mpq(1)}:
        raise AssertionError("reduction postcondition violated")
    return CompositionChain(stages=stages)


def _short(q: mpq) -> str:
    s = f"{q.numerator}/{q.denominator}"
    return s if len(s) <= 40 else f"<rational with {q.denominator.bit_length()}-bit denominator>"


def _short_int(n) -> str:
    s = str(n)
    return s if len(s) <= 20 else f"~2^{int(n).bit_length()}"


def consume_stage_polynomial(m, n, ring=QQ) -> Polynomial:
    """Dense form c X^m (1-X)^n of a consumption stage (small degrees only)."""
    m, n = int(m), int(n)
    if m + n > 4000:
        raise DomainError("stage too large to expand")
    c = mpq(m + n) ** (m + n) / (mpq(m) ** m * mpq(n) ** n)
    x = Polynomial.x(ring)
    one = Polynomial(ring, [ring.one])
    return (x ** m * (one - x) ** n).scale(ring.coerce(c))


# ---------------------------------------------------------------------------
# affine cover isomorphism for polynomial covers
# ---------------------------------------------------------------------------

def cover_isomorphic_affine(f: Polynomial, g: Polynomial):
    """Witness (u, v) with g = c f(uX + v) for some scalar c, or None.

    Polynomial covers are totally ramified at infinity, so any isomorphism of
    covers is affine; u is pinned by the constraints between the depressed
    forms, v by the subleading coefficient, and the full coefficient list is
    verified before returning.
    """
    if f.ring != g.ring:
        raise DomainError("polynomials over different rings")
    if f.degree != g.degree:
        raise DomainError("degree mismatch")
    n = f.degree
    if n < 1:
        raise DomainError("constant polynomials are not covers")
    ring = f.ring
    x = Polynomial.x(ring)
    nf_inv = ring.exact_div(ring.one, ring.coerce(n))
    tf = f.monic().coeff(n - 1) * nf_inv
    tg = g.monic().coeff(n - 1) * nf_inv
    fd = f.monic().compose(x - Polynomial(ring, [tf]))
    gd = g.monic().compose(x - Polynomial(ring, [tg]))
    constraints = []
    for k in range(n - 1, -1, -1):
        fk, gk = fd.coeff(k), gd.coeff(k)
        fz, gz = ring.is_zero(fk), ring.is_zero(gk)
        if fz and gz:
            continue
        if fz or gz:
            return None
        # u^(n-k) = fd_k / gd_k
        constraints.append((n - k, ring.exact_div(fk, gk)))
    candidates = _unit_root_candidates(ring, constraints)
    for u in candidates:
        if ring.is_zero(u):
            continue
        v = u * tg - tf
        cand = f.compose(x.scale(u) + Polynomial(ring, [v]))
        c = ring.exact_div(g.lc(), cand.lc())
        if cand.scale(c) == g:
            return u, v
    return None


def _unit_root_candidates(ring, constraints):
    """Solutions u of the system {u^e = r} in the coefficient field."""
    if not constraints:
        return [ring.one]
    x = Polynomial.x(ring)
    g = None
    for e, r in constraints:
        poly = x ** e - Polynomial(ring, [r])
        g = poly if g is None else g.gcd(poly)
    if g is None or g.degree == 0:
        return []
    return field_roots(g)


def field_roots(poly: Polynomial):
    """All roots of poly inside its own coefficient field (exact).

    Complete for degrees 1 and 2 and for binomials X^e - r with rational r;
    other shapes fall back to a rational-root scan plus a loud error if the
    remaining cofactor could still have roots that the scan cannot decide.
    """
    ring = poly.ring
    if poly.is_zero():
        raise DomainError("zero polynomial")
    if poly.degree == 0:
        return []
    if poly.degree == 1:
        return [ring.exact_div(-poly.coeff(0), poly.coeff(1))]
    if poly.degree == 2:
        a, b, c = poly.coeff(2), poly.coeff(1), poly.coeff(0)
        disc = b * b - 4 * a * c
        root = _field_sqrt(ring, disc)
        if root is None:
            return []
        inv = ring.exact_div(ring.one, 2 * a)
        r1 = (-b + root) * inv
        r2 = (-b - root) * inv
        return [r1] if r1 == r2 else [r1, r2]
    # binomial X^e - r
    if all(ring.is_zero(poly.coeff(i)) for i in range(1, poly.degree)):
        r = -poly.coeff(0)
        e = poly.degree
        roots = []
        for cand in _nth_root_candidates(ring, r, e):
            if ring.is_zero(cand ** e - r) and cand not in roots:
                roots.append(cand)
        return roots
    # rational-root scan as a last resort
    roots = []
    rationals = _rational_root_scan(ring, poly)
    rem = poly
    x = Polynomial.x(ring)
    for r in rationals:
        lin = x - Polynomial(ring, [r])
        while True:
            q, rr = divmod(rem, lin)
            if not rr.is_zero():
                break
            rem = q
            if r not in roots:
                roots.append(r)
    if rem.degree <= 2:
        roots.extend(z for z in field_roots(rem) if z not in roots)
        return roots
    raise DomainError("root search not implemented for this polynomial shape")


def _field_sqrt(ring, value):
    """Square root of a coefficient-ring element inside the ring, or None."""
    if ring is QQ or isinstance(ring, type(QQ)):
        from .numberfield import sqrt_rational
        r = sqrt_rational(value)
        return None if r is None else r
    field = ring.field
    if field.degree == 1:
        from .numberfield import sqrt_rational
        r = sqrt_rational(value.as_rational())
        return None if r is None else ring.coerce(r)
    if field.degree == 2:
        q = value.to_quadratic() if not value.is_rational() else value.as_rational()
        res = sqrt_in_quadratic(q, field.radicand)
        return None if res is None else res.to_algebraic(field)
    raise DomainError("square roots implemented for degree <= 2 fields")


def _nth_root_candidates(ring, r, e):
    """Candidate e-th roots of r in the field (verified by the caller)."""
    out = []
    rq = None
    if ring is QQ:
        rq = mpq(r)
    elif isinstance(ring, NumberFieldRing) and r.is_rational():
        rq = r.as_rational()
    if rq is not None:
        num = _int_nth_root(abs(rq.numerator), e)
        den = _int_nth_root(abs(rq.denominator), e)
        if num is not None and den is not None:
            base = mpq(num, den)
            out.extend([base, -base])
        if isinstance(ring, NumberFieldRing):
            field = ring.field
            if field.degree == 2 and e % 2 == 0:
                # (t sqrt(D))^e is rational for even e
                d = field.radicand
                tq = rq / mpq(d) ** (e // 2)
                tn = _int_nth_root(abs(tq.numerator), e)
                td = _int_nth_root(abs(tq.denominator), e)
                if tn is not None and td is not None:
                    t = mpq(tn, td)
                    root_d = QuadraticElement(0, 1, d).to_algebraic(field)
                    out.extend([root_d.field.from_rational(t) * root_d,
                                root_d.field.from_rational(-t) * root_d])
            out = [ring.coerce(c) for c in out]
            # twist by the extra roots of unity of Q(i) and Q(sqrt(-3))
            units = _field_units(field)
            out = [c * u for c in out for u in units]
    if e == 2:
        s = _field_sqrt(ring, ring.coerce(r) if not isinstance(r, mpq) else r)
        if s is not None:
            out.extend([s, -s])
    seen = []
    for c in out:
        c = ring.coerce(c)
        if c not in seen:
            seen.append(c)
    return seen


def _field_units(field: NumberField):
    one = field.one()
    units = [one, -one]
    if field.degree != 2:
        return units
    d = field.radicand
    if d == -1:
        i = QuadraticElement(0, 1, -1).to_algebraic(field)
        units += [i, -i]
    elif d == -3:
        w = QuadraticElement(mpq(1, 2), mpq(1, 2), -3).to_algebraic(field)
        units += [w, -w, w * w, -w * w]
    return units


def _int_nth_root(n, e):
    n = mpz(n)
    root, exact = gmpy2.iroot(n, e)
    return root if exact else None


def _rational_root_scan(ring, poly):
    """Rational roots of a polynomial whose coefficients are all rational."""
    coeffs = []
    for c in poly.coeffs:
        if isinstance(c, mpq):
            coeffs.append(c)
        elif c.is_rational():
            coeffs.append(c.as_rational())
        else:
            return []
    from .numberfield import _rational_roots
    return [ring.coerce(r) for r in _rational_roots(coeffs)]


# ---------------------------------------------------------------------------
# Moebius maps and factored rational maps
# ---------------------------------------------------------------------------

class Mobius:
    """(a X + b) / (c X + d) acting on the projective line over a field."""

    __slots__ = ("ring", "a", "b", "c", "d")

    def __init__(self, ring, a, b, c, d):
        self.ring = ring
        self.a, self.b = ring.coerce(a), ring.coerce(b)
        self.c, self.d = ring.coerce(c), ring.coerce(d)
        if ring.is_zero(self.a * self.d - self.b * self.c):
            raise DomainError("degenerate Moebius matrix")

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring.one, ring.zero, ring.zero, ring.one)

    def apply(self, p):
        if p is INFINITY:
            if self.ring.is_zero(self.c):
                return INFINITY
            return self.ring.exact_div(self.a, self.c)
        p = self.ring.coerce(p)
        den = self.c * p + self.d
        if self.ring.is_zero(den):
            return INFINITY
        return self.ring.exact_div(self.a * p + self.b, den)

    def inverse(self) -> "Mobius":
        return Mobius(self.ring, self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Mobius") -> "Mobius":
        return Mobius(self.ring,
                      self.a * other.a + self.b * other.c,
                      self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c,
                      self.c * other.b + self.d * other.d)

    def is_identity(self) -> bool:
        return self.ring.is_zero(self.b) and self.ring.is_zero(self.c) and \
            self.ring.is_zero(self.a - self.d)

    @classmethod
    def through_points(cls, ring, src, dst) -> "Mobius":
        """The Moebius map with src[i] -> dst[i] for three distinct points."""
        m_src = cls._to_standard(ring, src)
        m_dst = cls._to_standard(ring, dst)
        out = m_dst.inverse().compose(m_src)
        for s, t in zip(src, dst):
            if out.apply(s) != t:
                raise AssertionError("three-point interpolation failed")
        return out

    @classmethod
    def _to_standard(cls, ring, pts):
        """Map (p1, p2, p3) -> (0, 1, infinity)."""
        p1, p2, p3 = pts
        if p1 is INFINITY:
            p2, p3 = ring.coerce(p2), ring.coerce(p3)
            return cls(ring, ring.zero, p2 - p3, ring.one, -p3)
        if p2 is INFINITY:
            p1, p3 = ring.coerce(p1), ring.coerce(p3)
            return cls(ring, ring.one, -p1, ring.one, -p3)
        if p3 is INFINITY:
            p1, p2 = ring.coerce(p1), ring.coerce(p2)
            return cls(ring, ring.one, -p1, ring.zero, p2 - p1)
        p1, p2, p3 = ring.coerce(p1), ring.coerce(p2), ring.coerce(p3)
        return cls(ring, p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1))

    def conjugate(self) -> "Mobius":
        return Mobius(self.ring, *[_conj(v) for v in (self.a, self.b, self.c, self.d)])


def _conj(v):
    if isinstance(v, mpq):
        return v
    return apply_automorphism(v)


class FactoredMap:
    """A rational map as scalar * prod (X - root)^exp, exponents nonzero.

    The exponent at infinity is the negative sum of the finite exponents, so
    the factored data is complete. Suited to exact composition with Moebius
    maps and conjugation without any dense expansion.
    """

    def __init__(self, ring, scalar, factors):
        self.ring = ring
        self.scalar = ring.coerce(scalar)
        if ring.is_zero(self.scalar):
            raise DomainError("zero map")
        self.factors = {}
        for root, e in factors.items() if isinstance(factors, dict) else factors:
            if e == 0:
                continue
            root = ring.coerce(root)
            self.factors[root] = self.factors.get(root, 0) + int(e)
        self.factors = {r: e for r, e in self.factors.items() if e != 0}

    @property
    def inf_exponent(self) -> int:
        return -sum(self.factors.values())

    @property
    def degree(self) -> int:
        return sum(e for e in self.factors.values() if e > 0) + \
            max(0, self.inf_exponent)

    def evaluate(self, p):
        if p is INFINITY:
            oi = self.inf_exponent
            if oi < 0:
                return INFINITY
            if oi > 0:
                return self.ring.zero
            return self.scalar
        p = self.ring.coerce(p)
        num = self.scalar
        den = self.ring.one
        for root, e in self.factors.items():
            diff = p - root
            if self.ring.is_zero(diff):
                return self.ring.zero if e > 0 else INFINITY
            if e > 0:
                num = num * diff ** e
            else:
                den = den * diff ** (-e)
        return self.ring.exact_div(num, den)

    def zeros(self):
        out = [(r, e) for r, e in self.factors.items() if e > 0]
        if self.inf_exponent > 0:
            out.append((INFINITY, self.inf_exponent))
        return out

    def poles(self):
        out = [(r, -e) for r, e in self.factors.items() if e < 0]
        if self.inf_exponent < 0:
            out.append((INFINITY, -self.inf_exponent))
        return out

    def conjugate(self) -> "FactoredMap":
        return FactoredMap(self.ring, _conj(self.scalar),
                           [(_conj(r), e) for r, e in self.factors.items()])

    def compose_mobius(self, phi: Mobius) -> "FactoredMap":
        """The pullback self o phi, still in factored form."""
        inv = phi.inverse()
        new_factors = {}
        for root, e in self.factors.items():
            q = inv.apply(root)
            if q is INFINITY:
                continue
            new_factors[q] = new_factors.get(q, 0) + e
        q_inf = inv.apply(INFINITY)
        if q_inf is not INFINITY and self.inf_exponent != 0:
            new_factors[q_inf] = new_factors.get(q_inf, 0) + self.inf_exponent
        new_factors = {r: e for r, e in new_factors.items() if e != 0}
        # pin the scalar by evaluating at a fresh rational point
        t = mpq(0)
        while True:
            tt = self.ring.coerce(t)
            if all(not self.ring.is_zero(tt - r) for r in new_factors):
                img = phi.apply(tt)
                if img is not INFINITY:
                    val = self.evaluate(img)
                    if val is not INFINITY and not self.ring.is_zero(val):
                        break
            t += 1
        prod = self.ring.one
        for root, e in new_factors.items():
            diff = tt - root
            prod = prod * diff ** e if e > 0 else self.ring.exact_div(
                prod, diff ** (-e))
        scalar = self.ring.exact_div(val, prod)
        return FactoredMap(self.ring, scalar, new_factors)

    def to_rational_map(self, max_degree: int = 512) -> RationalMap:
        if self.degree > max_degree:
            raise DomainError("factored map too large to expand")
        x = Polynomial.x(self.ring)
        num = Polynomial(self.ring, [self.scalar])
        den = Polynomial(self.ring, [self.ring.one])
        for root, e in self.factors.items():
            lin = x - Polynomial(self.ring, [root])
            if e > 0:
                num = num * lin ** e
            else:
                den = den * lin ** (-e)
        return rmap_normalize(num, den)

    def __eq__(self, other):
        if not isinstance(other, FactoredMap):
            return NotImplemented
        if self.ring != other.ring or self.factors != other.factors:
            return False
        return self.ring.is_zero(self.scalar - other.scalar)

    def __repr__(self):
        return f"FactoredMap(deg {self.degree}, {len(self.factors)} finite factors)"


# ---------------------------------------------------------------------------
# field of moduli for quadratic coefficients
# ---------------------------------------------------------------------------

def _anchors_from_factored(f: FactoredMap, one_fiber_anchor=None):
    anchors = []
    for p, e in f.zeros():
        if e >= 2:
            anchors.append(("0", e, p))
    for p, e in f.poles():
        if e >= 2:
            anchors.append(("inf", e, p))
    if one_fiber_anchor is not None:
        point, mult = one_fiber_anchor
        anchors.append(("1", mult, point))
    return anchors


def _anchors_from_rmap(f: RationalMap):
    anchors = []
    ring = f.ring

    def collect(poly, tag):
        if poly.degree <= 0:
            return
        for factor, mult in poly.squarefree_decomposition():
            if mult < 2:
                continue
            if factor.degree == 1:
                root = ring.exact_div(-factor.coeff(0), factor.coeff(1))
                anchors.append((tag, mult, root))

    collect(f.num, "0")
    collect(f.den, "inf")
    collect(f.num - f.den, "1")
    dn, dd = f.num.degree, f.den.degree
    if dn != dd:
        if abs(dn - dd) >= 2:
            anchors.append(("inf" if dn > dd else "0", abs(dn - dd), INFINITY))
    else:
        c = ring.exact_div(f.num.lc(), f.den.lc())
        diff = f.num - f.den.scale(c)
        mult = dn - diff.degree
        if mult >= 2:
            if not ring.is_zero(c - ring.one):
                return anchors  # value at infinity outside {0, 1}: not Belyi
            anchors.append(("1", mult, INFINITY))
    return anchors


def _match_anchors(src_anchors, dst_anchors, max_candidates=120):
    """All bijections src->dst matching (fiber, multiplicity) classes."""
    from collections import defaultdict
    src_groups, dst_groups = defaultdict(list), defaultdict(list)
    for tag, mult, p in src_anchors:
        src_groups[(tag, mult)].append(p)
    for tag, mult, p in dst_anchors:
        dst_groups[(tag, mult)].append(p)
    if set(src_groups) != set(dst_groups):
        return []
    keys = sorted(src_groups, key=str)
    pools = []
    total = 1
    for k in keys:
        if len(src_groups[k]) != len(dst_groups[k]):
            return []
        perms = list(itertools.permutations(dst_groups[k]))
        total *= len(perms)
        if total > max_candidates:
            raise DomainError("too many anchor correspondences to search")
        pools.append(perms)
    matchings = []
    for combo in itertools.product(*pools):
        pairs = []
        for k, perm in zip(keys, combo):
            pairs.extend(zip(src_groups[k], perm))
        matchings.append(pairs)
    return matchings


def moduli_field_quadratic(f, one_fiber_anchor=None):
    """Decide whether the field of moduli of a Belyi map over a quadratic
    field is Q or the field itself.

    Accepts a FactoredMap (any degree; the optional one_fiber_anchor supplies
    a known ramification point over 1 as (point, multiplicity)) or a dense
    RationalMap (moderate degree). Candidate isomorphisms between the
    conjugate cover and the cover are generated from ramification-multiset
    matching and verified exactly.
    """
    factored = isinstance(f, FactoredMap)
    ring = f.ring
    if ring is QQ or (isinstance(ring, NumberFieldRing) and ring.field.degree == 1):
        return "Q"
    if not isinstance(ring, NumberFieldRing) or ring.field.degree != 2:
        raise DomainError("moduli check implemented over quadratic fields")

    if factored:
        rational_data = all(r.is_rational() for r in f.factors) and \
            f.scalar.is_rational()
        sigma_f = f.conjugate()
        anchors = _anchors_from_factored(f, one_fiber_anchor)
        sigma_anchors = _anchors_from_factored(sigma_f, one_fiber_anchor)
    else:
        rational_data = all(c.is_rational() for c in
                            list(f.num.coeffs) + list(f.den.coeffs))
        sigma_f = rmap_normalize(
            f.num.map_coefficients(_conj, ring),
            f.den.map_coefficients(_conj, ring))
        anchors = _anchors_from_rmap(f)
        sigma_anchors = _anchors_from_rmap(sigma_f)
    if rational_data:
        return "Q"

    finite_anchor_count = sum(1 for (_, _, p) in anchors)
    if finite_anchor_count < 3:
        raise DomainError("not enough ramified points to anchor an isomorphism")

    for pairing in _match_anchors(sigma_anchors, anchors):
        seen_src, triple = set(), []
        for s, d in pairing:
            key = repr(s)
            if key in seen_src:
                continue
            seen_src.add(key)
            triple.append((s, d))
            if len(triple) == 3:
                break
        if len(triple) < 3:
            continue
        try:
            phi = Mobius.through_points(ring, [s for s, _ in triple],
                                        [d for _, d in triple])
        except (DomainError, AssertionError):
            continue
        if factored:
            if f.compose_mobius(phi) == sigma_f:
                return "Q"
        else:
            if _rmap_compose_mobius(f, phi) == sigma_f:
                return "Q"
    return ring.field


def _rmap_compose_mobius(f: RationalMap, phi: Mobius) -> RationalMap:
    ring = f.ring
    d = max(f.num.degree, f.den.degree)
    top = Polynomial(ring, [phi.b, phi.a])
    bot = Polynomial(ring, [phi.d, phi.c])

    def substitute(p):
        acc = Polynomial(ring, [])
        for i in range(d + 1):
            c = p.coeff(i)
            if ring.is_zero(c):
                continue
            acc = acc + (top ** i * bot ** (d - i)).scale(c)
        return acc

    return rmap_normalize(substitute(f.num), substitute(f.den))
