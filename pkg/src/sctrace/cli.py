"""Command-line front end.

Exit codes: 0 ok, 1 a requested check failed, 2 usage error, 3 internal consistency failure.
"""
import argparse
import csv
import json
import math
import sys

from .arith_core import prime_divisors
from .cyclotomic import ShadowDivergence, format_cyc
from .local_data import (
    DepthZero,
    LevelError,
    check_shape,
    enumerate_tuples,
    format_root_of_unity,
    global_root_number,
    parse_root_of_unity,
    validate_tuple,
)
from .residue_fields import Nebentypus
from .trace_engine import (
    CSV_HEADER,
    InternalConsistencyError,
    bias_partition,
    format_partition,
    root_number_key,
    trace_hecke,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# option parsing

def parse_neb(text, N):
    """'trivial', 'q<p>' (quadratic mod p) or 'p:a,p:a' exponents on the smallest primitive roots."""
    text = (text or "trivial").strip()
    try:
        if text == "trivial":
            return Nebentypus.trivial(N)
        if text.startswith("q"):
            p = int(text[1:])
            if p == 2:
                raise UsageError("no quadratic character of conductor 2")
            return Nebentypus(N, {p: (p - 1) // 2})
        exps = {}
        for part in text.split(","):
            p, a = part.split(":")
            exps[int(p)] = int(a)
        return Nebentypus(N, exps)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError("bad --neb %r: %s" % (text, exc)) from exc


def parse_moduli(items):
    """['11:7,2'] -> {11: (7, 2)} for X^2 + 7X + 2."""
    out = {}
    for item in items or []:
        try:
            p, rest = item.split(":")
            a, b = rest.split(",")
            out[int(p)] = (int(a), int(b))
        except ValueError as exc:
            raise UsageError("bad --fp2-modulus %r (expected p:a,b)" % item) from exc
    return out


def parse_rep(item):
    """'p:t:zeta' for a simple supercuspidal, 'p:m' for a depth-zero one."""
    parts = item.split(":")
    try:
        if len(parts) == 3:
            return int(parts[0]), ("simple", int(parts[1]), parse_root_of_unity(parts[2]))
        if len(parts) == 2:
            return int(parts[0]), ("depth_zero", int(parts[1]))
    except ValueError as exc:
        raise UsageError("bad --rep %r: %s" % (item, exc)) from exc
    raise UsageError("bad --rep %r (expected p:t:zeta or p:m)" % item)


def select_tuples(args):
    """Tuples at S^2 T^3 matching --t/--zeta/--rep, admissible at weight k."""
    S, T = args.S, args.T
    try:
        check_shape(S, T)
    except LevelError as exc:
        raise UsageError(str(exc)) from exc
    neb = parse_neb(args.neb, S * S * T**3)
    moduli = parse_moduli(args.fp2_modulus)
    specs = dict(parse_rep(item) for item in args.rep or [])
    simple_primes = prime_divisors(T)
    if args.t is not None or args.zeta is not None:
        if len(simple_primes) != 1:
            raise UsageError("--t/--zeta need exactly one prime in T; use --rep p:t:zeta")
        try:
            zeta = None if args.zeta is None else parse_root_of_unity(args.zeta)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        specs.setdefault(simple_primes[0], ("simple", args.t, zeta))
    for p in specs:
        if (S * T) % p:
            raise UsageError("--rep given at %d, which does not divide S*T" % p)
    out = []
    for tup in enumerate_tuples(S, T, neb, moduli):
        if validate_tuple(tup, args.k):
            continue
        if all(_spec_ok(tup.rep_at(p), spec) for p, spec in specs.items()):
            out.append(tup)
    return neb, moduli, out


def _spec_ok(rep, spec):
    if spec[0] == "simple":
        _, t, zeta = spec
        if isinstance(rep, DepthZero):
            return False
        return (t is None or rep.t == t % rep.p) and (zeta is None or rep.zeta_exp == zeta)
    if not isinstance(rep, DepthZero):
        return False
    order = rep.nu.ctx.order
    # nu_m and nu_{pm} give the same representation
    return rep.m in (spec[1] % order, spec[1] * rep.p % order)


# output

def emit_table(rows, header, out):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    for row in [header] + rows:
        out.write("  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")


def emit(rows, header, fmt, out, records=None):
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    elif fmt == "json":
        out.write(json.dumps(records if records is not None else [dict(zip(header, r)) for r in rows], indent=1) + "\n")
    else:
        emit_table(rows, header, out)


def breakdown_rows(report):
    rows = []
    for term in report.gamma_terms:
        g = term.gamma
        rows.append(
            [
                str(g),
                g.delta,
                ",".join(str(l) for l in term.unramified) or "-",
                "%s*%s" % (term.weight, term.measure) if term.weight != 1 else str(term.measure),
                format_cyc(term.phi_infty),
                "; ".join("%d: %s" % (p, format_cyc(v)) for p, v in term.local.items()),
                "; ".join("%d: %d" % (l, v) for l, v in term.unramified.items()) or "-",
            ]
        )
    return rows


BREAKDOWN_HEADER = ["gamma", "Delta", "l", "m", "Phi_inf", "Phi_p", "Phi_l"]


# commands

def _require_match(tups):
    if not tups:
        raise UsageError("no admissible tuple matches the given options")


def cmd_trace(args, out, n=None):
    _, _, tups = select_tuples(args)
    _require_match(tups)
    n = args.n if n is None else n
    if math.gcd(n, args.S * args.T) != 1:
        raise UsageError("n=%d must be coprime to the level" % n)
    reports = [trace_hecke(tup, args.k, n) for tup in tups]
    if args.format == "json":
        out.write(json.dumps([r.to_json() for r in reports], indent=1) + "\n")
        return EXIT_OK
    if args.format == "csv":
        emit([r.csv_row() for r in reports], CSV_HEADER, "csv", out)
        return EXIT_OK
    if len(reports) == 1 and not args.breakdown:
        out.write(format_cyc(reports[0].total) + "\n")
        return EXIT_OK
    for r in reports:
        out.write("%s  %s\n" % (r.tuple.label, format_cyc(r.total)))
        if args.breakdown:
            out.write("  identity term: %s\n" % format_cyc(r.identity_term))
            emit_table(breakdown_rows(r), BREAKDOWN_HEADER, out)
    return EXIT_OK


def cmd_dim(args, out):
    if args.format == "json" or args.breakdown:
        return cmd_trace(args, out, n=1)
    _, _, tups = select_tuples(args)
    _require_match(tups)
    rows = []
    for tup in tups:
        report = trace_hecke(tup, args.k, 1)
        q = report.rationalized
        if q is None or q.denominator != 1 or q < 0:
            raise InternalConsistencyError("dimension for %s is %s" % (tup.label, format_cyc(report.total)))
        rows.append([tup.N, args.k, tup.label, int(q)])
    if len(rows) == 1 and args.format == "table":
        out.write("%d\n" % rows[0][3])
        return EXIT_OK
    if args.format == "table" and len(rows) > 1:
        rows.append(["", "", "total", sum(r[3] for r in rows)])
    emit(rows, ["level", "weight", "tuple", "dim"], args.format, out)
    return EXIT_OK


def cmd_enumerate(args, out):
    S, T = args.S, args.T
    try:
        check_shape(S, T)
    except LevelError as exc:
        raise UsageError(str(exc)) from exc
    neb = parse_neb(args.neb, S * S * T**3)
    rows, records = [], []
    for tup in enumerate_tuples(S, T, neb, parse_moduli(args.fp2_modulus)):
        problems = validate_tuple(tup, args.k) if args.k else []
        eps = global_root_number(args.k, tup) if args.k else None
        rn = "-" if eps is None else format_root_of_unity(root_number_key(eps))
        rows.append([tup.N, tup.label, rn, "yes" if not problems else "no: " + "; ".join(problems)])
        records.append(dict(tup.to_json(args.k), label=tup.label, root_number=rn, problems=problems))
    emit(rows, ["level", "tuple", "root_number", "admissible"], args.format, out, records)
    return EXIT_OK


def cmd_bias(args, out):
    S, T = args.S, args.T
    try:
        check_shape(S, T)
    except LevelError as exc:
        raise UsageError(str(exc)) from exc
    neb = parse_neb(args.neb, S * S * T**3)
    try:
        totals = bias_partition(S, T, args.k, neb, parse_moduli(args.fp2_modulus))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    named = format_partition(totals)
    delta = named.get("+1", 0) - named.get("-1", 0)
    if args.format == "json":
        out.write(json.dumps({"level": S * S * T**3, "weight": args.k, "dims": named, "delta": delta}, indent=1) + "\n")
        return EXIT_OK
    rows = [[x, d] for x, d in named.items()]
    if args.format == "csv":
        emit(rows, ["root_number", "dim"], "csv", out)
        return EXIT_OK
    emit_table(rows, ["root_number", "dim"], out)
    out.write("Delta = %d\n" % delta)
    return EXIT_OK


def cmd_validate(args, out):
    from .acceptance import run_all, run_check

    results = run_all() if not args.criterion else [run_check(c) for c in args.criterion]
    if args.format == "json":
        out.write(json.dumps([r.__dict__ for r in results], indent=1) + "\n")
    else:
        for r in results:
            out.write(r.line + "\n")
        out.write("%d/%d passed\n" % (sum(r.passed for r in results), len(results)))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def cmd_lmfdb_check(args, out):
    from .lmfdb_interface import OfflineError, compare, engine_records, fetch_orbits

    S, T = args.S, args.T
    try:
        check_shape(S, T)
    except LevelError as exc:
        raise UsageError(str(exc)) from exc
    N = S * S * T**3
    neb = parse_neb(args.neb, N)
    try:
        orbits = fetch_orbits(N, args.k, args.char, offline=True if args.offline else None)
    except OfflineError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_CHECK
    common = set.intersection(*(set(o.traces) for o in orbits)) if orbits else set()
    ns = sorted(n for n in common if 1 < n <= args.max_n and math.gcd(n, N) == 1)
    result = compare(engine_records(S, T, args.k, neb, ns, parse_moduli(args.fp2_modulus)), orbits)
    if args.format == "json":
        out.write(
            json.dumps(
                {"consistent": result.consistent, "solutions": result.solutions, "assignment": result.assignment, "mismatches": result.mismatches},
                indent=1,
            )
            + "\n"
        )
    else:
        out.write("\n".join(result.summary_lines()) + "\n")
    return EXIT_OK if result.consistent else EXIT_CHECK


# parser

def _level_options(p, weight=True):
    p.add_argument("--S", type=int, default=1, help="squarefree part with p^2 || N")
    p.add_argument("--T", type=int, default=1, help="squarefree part with p^3 || N")
    if weight:
        p.add_argument("--k", type=int, required=True, help="weight, k > 2")
    p.add_argument("--neb", default="trivial", help="trivial, q<p>, or p:a,... on the smallest primitive roots")
    p.add_argument("--fp2-modulus", action="append", metavar="p:a,b", help="F_{p^2} = F_p[X]/(X^2+aX+b)")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")


def _tuple_options(p):
    p.add_argument("--t", type=int, help="t for the simple supercuspidal (single prime in T)")
    p.add_argument("--zeta", help="root number: +1, -1, i, -i or e(a/b); write --zeta=-i for -i")
    p.add_argument("--rep", action="append", metavar="p:t:zeta|p:m", help="fix the representation at p")
    p.add_argument("--breakdown", action="store_true", help="per-gamma contributions")


def build_parser():
    parser = argparse.ArgumentParser(prog="sctrace", description="Dimensions and Hecke traces on newforms with supercuspidal local types.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of S_k(sigma)")
    _level_options(p)
    _tuple_options(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("trace", help="trace of T_n on S_k(sigma)")
    _level_options(p)
    _tuple_options(p)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("enumerate", help="list the local-type tuples at a level")
    _level_options(p, weight=False)
    p.add_argument("--k", type=int, help="weight, for admissibility and root numbers")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bias", help="total dimension by global root number")
    _level_options(p)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("validate", help="run the acceptance suite")
    p.add_argument("--criterion", action="append", help="run only this criterion (repeatable)")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lmfdb-check", help="match engine traces against LMFDB newform orbits")
    _level_options(p)
    p.add_argument("--char", required=True, help="LMFDB character orbit letter")
    p.add_argument("--offline", action="store_true", help="fixtures and cache only")
    p.add_argument("--max-n", type=int, default=30, help="largest Hecke index to compare")
    p.set_defaults(func=cmd_lmfdb_check)
    return parser


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "k", None) is not None and args.k <= 2:
        sys.stderr.write("error: weight must exceed 2\n")
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except (InternalConsistencyError, ShadowDivergence) as exc:
        sys.stderr.write("internal consistency failure: %s\n" % exc)
        return EXIT_INTERNAL


def main():
    sys.exit(run())
