"""Parsing and rendering of polynomials and field elements.

Input format: integer/rational coefficients, caret powers, e.g. "x^2+11",
"(1/2)*x^3 - x". The generator of a number field is written "g", both as a
standalone element ("(1+g)/2") and inside polynomial coefficients
("x^2 + g*x"). Parsing goes through Python's ast with a strict whitelist.
"""

from __future__ import annotations

import ast

from gmpy2 import mpq, mpz

from .intmath import DomainError
from .numberfield import AlgebraicElement, NumberField, QuadraticElement
from .polynomials import QQ, NumberFieldRing, Polynomial, RationalMap


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def _eval_node(node, names):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, names)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return mpq(node.value)
        raise DomainError(f"only integer literals allowed, got {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id in names:
            return names[node.id]
        raise DomainError(f"unknown symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand, names)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        left = _eval_node(node.left, names)
        right = _eval_node(node.right, names)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if isinstance(right, Polynomial):
                if right.degree > 0:
                    raise DomainError("division by a non-constant polynomial")
                right = right.constant_term()
            if isinstance(right, mpq) and right == 0:
                raise DomainError("division by zero")
            if isinstance(left, Polynomial):
                return left.scale(left.ring.exact_div(left.ring.one,
                                                      left.ring.coerce(right)))
            return left / right
        if isinstance(node.op, ast.Pow):
            if isinstance(right, Polynomial):
                if right.degree > 0:
                    raise DomainError("exponent must be a constant")
                right = right.constant_term()
            e = mpq(right)
            if e.denominator != 1 or e < 0:
                raise DomainError("exponents must be nonnegative integers")
            return left ** int(e)
    raise DomainError("unsupported expression syntax")


def _parse_expr(text: str, names):
    text = text.replace("^", "**").strip()
    if not text:
        raise DomainError("empty expression")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval_node(tree, names)


def parse_poly(text: str, field: NumberField | None = None) -> Polynomial:
    """Parse a polynomial in x over Q, or over a field when one is given."""
    ring = QQ if field is None else NumberFieldRing(field)
    names = {"x": Polynomial.x(ring), "X": Polynomial.x(ring)}
    if field is not None:
        names["g"] = Polynomial.constant(ring, field.gen())
    val = _parse_expr(text, names)
    if not isinstance(val, Polynomial):
        val = Polynomial.constant(ring, ring.coerce(val))
    return val


def parse_element(text: str, field: NumberField) -> AlgebraicElement:
    """Parse a field element given as a polynomial expression in g."""
    names = {"g": field.gen()}
    val = _parse_expr(text, names)
    if isinstance(val, (int, mpz, mpq)):
        return field.from_rational(val)
    if isinstance(val, AlgebraicElement):
        return val
    raise DomainError("expression is not a field element")


def parse_field(text: str) -> NumberField:
    """Parse a number field from its integer-coefficient minimal polynomial."""
    poly = parse_poly(text, None)
    if poly.degree < 1:
        raise DomainError("minimal polynomial must be nonconstant")
    return NumberField([mpq(c) for c in poly.coeffs])


def parse_rational(text: str) -> mpq:
    val = _parse_expr(text, {})
    if isinstance(val, Polynomial):
        raise DomainError("expected a rational number")
    return mpq(val)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_rational(q) -> str:
    q = mpq(q)
    return str(q)


def render_quadratic(x) -> str:
    """Deterministic "a+b*sqrt(D)" rendering of a quadratic (or rational) value."""
    if isinstance(x, AlgebraicElement):
        if x.is_rational():
            return render_rational(x.as_rational())
        x = x.to_quadratic()
    if isinstance(x, QuadraticElement):
        if x.b == 0:
            return render_rational(x.a)
        sign = "+" if x.b > 0 else "-"
        return f"{x.a}{sign}{abs(x.b)}*sqrt({x.D})"
    return render_rational(x)


def _render_coeff(c) -> str:
    if isinstance(c, mpq):
        return str(c)
    if isinstance(c, AlgebraicElement):
        if c.is_rational():
            return str(c.as_rational())
        parts = []
        for i, co in enumerate(c.coords):
            if co == 0:
                continue
            if i == 0:
                parts.append(str(co))
            elif i == 1:
                parts.append(f"{co}*g" if co != 1 else "g")
            else:
                parts.append(f"{co}*g^{i}" if co != 1 else f"g^{i}")
        return "(" + " + ".join(parts) + ")" if parts else "0"
    return str(c)


def render_poly(f: Polynomial, var: str = "x") -> str:
    """Deterministic human-readable polynomial string."""
    if f.is_zero():
        return "0"
    chunks = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if f.ring.is_zero(c):
            continue
        cs = _render_coeff(c)
        if i == 0:
            term = cs
        else:
            xpow = var if i == 1 else f"{var}^{i}"
            if cs == "1":
                term = xpow
            elif cs == "-1":
                term = f"-{xpow}"
            else:
                term = f"{cs}*{xpow}"
        chunks.append(term)
    out = chunks[0]
    for t in chunks[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def render_rmap(f: RationalMap, var: str = "x") -> str:
    if f.den.degree == 0 and f.den.coeff(0) == f.den.ring.one:
        return render_poly(f.num, var)
    return f"({render_poly(f.num, var)}) / ({render_poly(f.den, var)})"
