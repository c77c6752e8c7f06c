"""Command-line driver: deterministic, machine-readable reports.

Single JSON object on stdout for scalar commands; JSON lines for the
multi-record outputs (census, search, heights, delta2). The human format is
a pretty-printer over exactly the same data.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq, mpz

from . import __version__
from .intmath import DomainError, is_squarefree
from .engine import (CompositionChain, ReductionInfeasibleError, hat,
                     litcanu_reduce, pipeline_run)
from .parsing import (parse_field, parse_poly, parse_rational, render_poly,
                      render_quadratic)
from .polynomials import QQ

MAX_RENDER_BITS = 1024


def _json_default(obj):
    raise TypeError(f"non-serializable {type(obj)!r}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _dump_lines(records) -> str:
    return "\n".join(json.dumps(r, sort_keys=True, default=_json_default)
                     for r in records)


def _guard_rational(q) -> str:
    q = mpq(q)
    bits = max(q.numerator.bit_length(), q.denominator.bit_length())
    if bits > MAX_RENDER_BITS:
        return (f"<rational:num_bits={q.numerator.bit_length()},"
                f"den_bits={q.denominator.bit_length()}>")
    return str(q)


def _point_set_record(s) -> dict:
    rec = {"infinity": s.has_infinity,
           "points": [_guard_rational(p) if isinstance(p, mpq)
                      else render_quadratic(p) for p in s.points]}
    if s.loci:
        rec["algebraic_locus_degrees"] = [l.degree for l in s.loci]
    rec["cardinality"] = s.cardinality()
    return rec


def _stage_record(st) -> dict:
    rec = {"kind": st.kind, "degree": str(st.degree)}
    if st.kind == "poly":
        poly = st.payload
        bits = max((max(r.numerator.bit_length(), r.denominator.bit_length())
                    for c in poly.coeffs
                    for r in ([c] if isinstance(c, mpq) else c.coords)),
                   default=0)
        if bits <= MAX_RENDER_BITS:
            rec["coefficients"] = render_poly(poly)
        else:
            rec["coefficient_bits"] = bits
    elif st.kind == "affine":
        scale, shift = st.payload
        rec["scale"] = _guard_rational(scale)
        rec["shift"] = _guard_rational(shift)
    elif st.kind == "consume":
        m, n = st.payload
        rec["m"] = str(m)
        rec["n"] = str(n)
    if st.s_set is not None:
        rec["s_set"] = _point_set_record(st.s_set)
    return rec


def _chain_record(chain: CompositionChain) -> dict:
    return {"total_degree": str(chain.total_degree),
            "stages": [_stage_record(st) for st in chain.stages]}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_bounds(args):
    from .bounds import belyi_degree
    K = parse_field(args.field)
    report = belyi_degree(K, search_cap=0)
    return report.to_record(), False


def _cmd_degree(args):
    from .bounds import belyi_degree
    K = parse_field(args.field)
    report = belyi_degree(K, search_cap=args.max_degree)
    return report.to_record(), False


def _cmd_construct(args):
    from .dessins import belyi_certificate, construct_imaginary, \
        construct_prime, construct_real, family_solve

    if args.verify:
        with open(args.verify, "r", encoding="utf-8") as fh:
            stored = json.load(fh)
        a, b, c = stored["record"]["triple"]
        dessin = family_solve(a, b, c)
        cert = belyi_certificate(dessin)
        fresh = {"record": dessin.to_record(), "certificate": cert}
        matches = fresh["record"] == stored["record"] and \
            fresh["certificate"] == stored["certificate"]
        return {"verify": args.verify, "matches": matches,
                "verified": cert["verified"]}, False

    if args.triple:
        a, b, c = (int(t) for t in args.triple.split(","))
        dessin = family_solve(a, b, c)
    elif args.p is not None:
        dessin = construct_prime(args.p)
    elif args.d is not None:
        if args.d < 0:
            dessin = construct_imaginary(-args.d)
        else:
            dessin = construct_real(args.d)
    else:
        raise DomainError("construct needs --triple, --p or --d")
    cert = belyi_certificate(dessin)
    return {"record": dessin.to_record(), "certificate": cert}, False


def _cmd_search(args):
    from .dessins import belyi_certificate, search_family
    if args.d is None:
        raise DomainError("search needs --d")
    hits = search_family(args.d, args.max_degree or 12)
    records = []
    for dessin in hits:
        rec = dessin.to_record()
        if args.verify_all:
            rec["certificate"] = belyi_certificate(dessin)
        records.append(rec)
    return records, True


def _cmd_hat(args):
    field = parse_field(args.field) if args.field else None
    f = parse_poly(args.poly, field)
    result = hat(f)
    return {"input": render_poly(f), "hat": render_poly(result),
            "degree_in": f.degree, "degree_out": result.degree}, False


def _cmd_pipeline(args):
    K = _pipeline_field(args.field)
    chain, report = pipeline_run(K)
    report["chain"] = _chain_record(chain)
    return report, False


def _pipeline_field(text):
    if text is None:
        return None
    K = parse_field(text)
    return None if K.degree == 1 else K


def _cmd_reduce(args):
    if args.points:
        pts = [parse_rational(tok) for tok in args.points.split(",")]
        chain = litcanu_reduce(pts)
        return {"input_points": [str(p) for p in pts],
                "chain": _chain_record(chain),
                "final_set": _point_set_record(chain.final_s_set())}, False
    K = _pipeline_field(args.field)
    pchain, report = pipeline_run(K)
    rchain = litcanu_reduce(pchain.final_s_set())
    total = pchain.total_degree * rchain.total_degree
    return {"pipeline": report,
            "reduction": _chain_record(rchain),
            "final_set": _point_set_record(rchain.final_s_set()),
            "cover_degree": str(total)}, False


def _cmd_enumerate(args):
    from .combinatorics import enumerate_dessins
    triples, count = enumerate_dessins(args.degree)
    return [t.as_record() for t in triples], True


def _cmd_heights(args):
    from .heights import roy_thunder_check, verify_height_inequalities
    records = verify_height_inequalities(
        trials=args.trials, seed=args.seed,
        max_deg=args.max_deg, max_coeff=args.max_coeff)
    if args.field:
        records.append(roy_thunder_check(parse_field(args.field)))
    return records, True


def _cmd_delta2(args):
    from .bounds import delta2_harness
    report = delta2_harness(args.limit, jobs=args.jobs)
    rows = [dict(r, kind="prime") for r in report.pop("rows")]
    rows.append(dict(report, kind="summary"))
    return rows, True


# ---------------------------------------------------------------------------
# human rendering
# ---------------------------------------------------------------------------

def _humanize(value, indent=0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_humanize(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(_humanize(v, indent))
                lines.append(pad + "-")
            else:
                lines.append(f"{pad}- {v}")
        return "\n".join(lines)
    return f"{pad}{value}"


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belyi",
        description="Bounds and certificates for the Belyi degree of number fields")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="json")
    common.add_argument("--output", help="write the report to this path")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", type=int, default=128)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common],
                       help="lower/upper bounds from the closed constructions")
    p.add_argument("--field", required=True)
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("degree", parents=[common],
                       help="full Belyi-degree report with certificates")
    p.add_argument("--field", required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.set_defaults(fn=_cmd_degree)

    p = sub.add_parser("construct", parents=[common],
                       help="build and certify a family dessin")
    p.add_argument("--triple", help="a,b,c")
    p.add_argument("--p", type=int, help="prime construction")
    p.add_argument("--d", type=int, help="radicand construction (sign picks the family)")
    p.add_argument("--verify", help="re-verify a stored construct report")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("search", parents=[common],
                       help="scan the family for a given field")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=12)
    p.add_argument("--verify-all", action="store_true")
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("hat", parents=[common],
                       help="the critical-value polynomial transform")
    p.add_argument("--poly", required=True)
    p.add_argument("--field", default=None)
    p.set_defaults(fn=_cmd_hat)

    p = sub.add_parser("pipeline", parents=[common],
                       help="run the degree-lowering chain for a field")
    p.add_argument("--field", default=None)
    p.set_defaults(fn=_cmd_pipeline)

    p = sub.add_parser("reduce", parents=[common],
                       help="push a rational point set into {0,1,inf}")
    p.add_argument("--points", help="comma-separated rationals")
    p.add_argument("--field", default=None,
                   help="run the pipeline first, then reduce")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("enumerate", parents=[common],
                       help="census of permutation triples at small degree")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("heights", parents=[common],
                       help="verify the height inequalities on random instances")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-deg", type=int, default=6)
    p.add_argument("--max-coeff", type=int, default=20)
    p.add_argument("--field", default=None,
                   help="also run the basis-height bound check for this field")
    p.set_defaults(fn=_cmd_heights)

    p = sub.add_parser("delta2", parents=[common],
                       help="the linear-discriminant harness for quadratic fields")
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(fn=_cmd_delta2)

    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, is_lines = args.fn(args)
    except (DomainError, ZeroDivisionError, ReductionInfeasibleError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        text = _dump_lines(payload) if is_lines else _dump(payload)
    else:
        text = _humanize(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
