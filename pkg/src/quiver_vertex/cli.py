"""
Command line interface.

    quiver-vertex vertex -p 2,1 -D 3 --method both
    quiver-vertex capped -p 2,2 -n 0 -r 1 --series -D 4
    quiver-vertex chamber -p 2,2 --enumerate
    quiver-vertex character -p 2,2 -n 0 -r 1 --theta 1,10,100
    quiver-vertex monodromy -p 2,1 --theta1 1,1,1 --theta2=-1,-1,-1
    quiver-vertex selftest --seed 7

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numeric non-convergence.
"""

import argparse
import json
import random
import sys
from fractions import Fraction
from itertools import combinations

from .partitions import (Partition, column_profile, partitions_up_to, box_stats,
                         p_box, shift_vector, slice_boxes, z_box)
from .qseries import (SpecializationContext, GuardError, PoleError, TruncatedSeries,
                      frac_str, as_fraction)
from . import vertex as vx
from . import chambers as ch
from . import monodromy as mo

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CONVERGE = 0, 1, 2, 3

CONTEXTS = [(Fraction(3, 7), Fraction(5, 11)),
            (Fraction(2, 9), Fraction(7, 13)),
            (Fraction(5, 17), Fraction(3, 19))]


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        sys.exit(EXIT_USAGE)


def emit(obj, fmt, out):
    if fmt == "json":
        out.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    else:
        out.write(_text(obj) + "\n")


def _text(obj, indent=""):
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append("%s%s:" % (indent, k))
                lines.append(_text(v, indent + "  "))
            else:
                lines.append("%s%s: %s" % (indent, k, v))
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list))
                         else "%s%s" % (indent, v) for v in obj)
    return "%s%s" % (indent, obj)


def _partition(text):
    try:
        return Partition.parse(text)
    except ValueError as e:
        raise UsageError(str(e))


def _ints(text):
    try:
        return [Fraction(t) for t in text.split(",")]
    except ValueError:
        raise UsageError("bad vector %r" % text)


def _ctx(args):
    try:
        return SpecializationContext(as_fraction(args.q), as_fraction(args.hbar))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e))


def _zvals(lam, text):
    prof = column_profile(lam)
    vals = {}
    for item in text.split(","):
        k, v = item.split("=")
        k = k.strip()
        if not k.startswith("z"):
            raise UsageError("bad assignment %r" % item)
        vals[int(k[1:])] = Fraction(v)
    missing = [i for i in prof.contents() if i not in vals]
    if missing:
        raise UsageError("missing values for z%s" % ", z".join(str(i) for i in missing))
    return [vals[i] for i in prof.contents()]


# ----------------------------------------------------------------------
# commands

def cmd_vertex(args):
    lam = _partition(args.partition)
    ctx = _ctx(args)
    res = {"partition": str(lam), "degree": args.degree,
           "variables": ["z%d" % i for i in column_profile(lam).contents()]}
    code = EXIT_OK
    if args.method in ("product", "both"):
        res["product"] = vx.vertex_product(lam, args.degree, ctx).to_json()
    if args.method in ("localization", "both"):
        res["localization"] = vx.vertex_localization(lam, args.degree, ctx).to_json()
    if args.method == "both":
        a = vx.vertex_product(lam, args.degree, ctx)
        b = vx.vertex_localization(lam, args.degree, ctx)
        res["diff"] = (a - b).to_json()
        if res["diff"]:
            code = EXIT_VERIFY
    return res, code


def cmd_capped(args):
    lam = _partition(args.partition)
    ctx = _ctx(args)
    try:
        expr = vx.capped_expression(lam, args.node, args.rank)
    except ValueError as e:
        raise UsageError(str(e))
    res = {"partition": str(lam), "node": args.node, "rank": args.rank,
           "expression": expr.to_json()}
    if args.series:
        res["series"] = expr.expand(args.degree, ctx).to_json()
    if args.eval:
        try:
            res["value"] = frac_str(expr.evaluate(_zvals(lam, args.eval), ctx))
        except PoleError as e:
            res["error"] = str(e)
            return res, EXIT_VERIFY
    return res, EXIT_OK


def _chamber_report(lam, C):
    r = C.to_json()
    r["m"] = {str(n): [ch.m_value(lam, b, C) for b in lam.boxes_of_content(n)]
              for n in column_profile(lam).contents()}
    return r


def cmd_chamber(args):
    lam = _partition(args.partition)
    if args.enumerate:
        chs = ch.enumerate_chambers(lam)
        return {"partition": str(lam), "count": len(chs),
                "chambers": [_chamber_report(lam, C) for C in chs]}, EXIT_OK
    if not args.theta:
        raise UsageError("give --theta or --enumerate")
    try:
        C = ch.classify(lam, _ints(args.theta))
    except ch.WallError as e:
        return {"partition": str(lam), "error": str(e)}, EXIT_VERIFY
    except ValueError as e:
        raise UsageError(str(e))
    return dict(_chamber_report(lam, C), partition=str(lam)), EXIT_OK


def cmd_character(args):
    lam = _partition(args.partition)
    try:
        C = ch.classify(lam, _ints(args.theta)) if args.theta else ch.positive_chamber(lam)
        char = ch.tautological_character(lam, args.node, args.rank, C)
        lim = ch.capped_limit_both(lam, args.node, args.rank, C)
    except ch.WallError as e:
        return {"partition": str(lam), "error": str(e)}, EXIT_VERIFY
    except ValueError as e:
        raise UsageError(str(e))
    return {"partition": str(lam), "node": args.node, "rank": args.rank,
            "theta": [str(t) for t in C.theta],
            "character": ch.laurent_json(char),
            "limit": {k: ch.laurent_json(v) for k, v in lim.items()}}, EXIT_OK


def _fmt(x):
    return "%.3e" % x


def cmd_monodromy(args):
    lam = _partition(args.partition)
    try:
        ctx = mo.NumericContext(mo.parse_complex(args.q), mo.parse_complex(args.hbar), args.tol)
        C1 = ch.classify(lam, _ints(args.theta1))
        C2 = ch.classify(lam, _ints(args.theta2))
    except ch.WallError as e:
        return {"partition": str(lam), "error": str(e)}, EXIT_VERIFY
    except ValueError as e:
        raise UsageError(str(e))
    n = column_profile(lam).nvars
    rng = random.Random(args.seed)
    pts = mo.sample_points(lam, rng, args.samples, n, ctx)
    worst = {"ratio_vs_formula": 0.0, "analytic_vs_formula": 0.0,
             "stab": 0.0, "periodicity": 0.0, "qde": 0.0}
    try:
        for z in pts:
            r = mo.monodromy_ratio(lam, C1, C2, z, ctx)
            worst["ratio_vs_formula"] = max(worst["ratio_vs_formula"],
                                            mo.rel_diff(r, mo.monodromy_formula(lam, C1, C2, z, ctx)))
            af = mo.analytic_monodromy_formula(lam, C1, C2, z, ctx)
            worst["analytic_vs_formula"] = max(worst["analytic_vs_formula"],
                                               mo.rel_diff(mo.analytic_monodromy(lam, C1, C2, z, ctx), af))
            worst["stab"] = max(worst["stab"], mo.rel_diff(
                af * ctx.hbar ** (-(C1.p - C2.p) / 2), mo.stab_ratio(lam, C1, C2, z, ctx)))
            for i in range(n):
                worst["periodicity"] = max(worst["periodicity"],
                                           mo.periodicity_defect(lam, C1, C2, z, i, ctx))
            for C in (C1, C2):
                for b in lam.boxes():
                    worst["qde"] = max(worst["qde"], mo.qde_residual(lam, b, z, ctx, C))
    except mo.NonConvergence as e:
        return {"partition": str(lam), "error": str(e)}, EXIT_CONVERGE
    res = {"partition": str(lam), "p1": C1.p, "p2": C2.p, "samples": args.samples,
           "tolerance": args.tol, "N": ctx.start_N(),
           "residual": {k: _fmt(v) for k, v in worst.items()},
           "pass": {k: v < args.tol for k, v in worst.items()}}
    return res, EXIT_OK if all(res["pass"].values()) else EXIT_VERIFY


# ----------------------------------------------------------------------
# self test

def _suite_oracle(ctx, size, D):
    bad = [str(l) for l in partitions_up_to(size)
           if vx.vertex_product(l, D, ctx) != vx.vertex_localization(l, D, ctx)]
    return not bad, {"failures": bad}


def _suite_capped_action(ctx, size, D):
    bad = []
    for lam in partitions_up_to(size):
        V = vx.vertex_product(lam, D, ctx)
        prof = column_profile(lam)
        for n in prof.contents():
            for r in range(1, prof.v(n) + 1):
                if vx.macdonald_apply(lam, n, r, V, ctx) != vx.capped_expand(lam, n, r, D, ctx) * V:
                    bad.append("%s n=%d r=%d" % (lam, n, r))
    return not bad, {"failures": bad}


def _operators(lam):
    prof = column_profile(lam)
    return [(n, r) for n in prof.contents() for r in range(1, prof.v(n) + 1)]


def _suite_commute(ctx, size, D):
    bad = []
    for lam in partitions_up_to(size):
        V = vx.vertex_product(lam, D, ctx)
        for a, b in combinations(_operators(lam), 2):
            x = vx.macdonald_apply(lam, a[0], a[1], vx.macdonald_apply(lam, b[0], b[1], V, ctx), ctx)
            y = vx.macdonald_apply(lam, b[0], b[1], vx.macdonald_apply(lam, a[0], a[1], V, ctx), ctx)
            if x != y:
                bad.append("%s %s %s" % (lam, a, b))
    return not bad, {"failures": bad}


def _suite_eigen(ctx, side, D):
    avals = [Fraction(2, 13), Fraction(17, 5), Fraction(7, 19), Fraction(11, 3)]
    bad = []
    for N in range(1, side + 1):
        lam = Partition([N] * N)
        a = avals[:N]
        Vp = vx.flag_vertex(lam, 0, D, a, ctx)
        for r in range(1, N + 1):
            if vx.flag_apply(lam, 0, r, Vp, a, ctx) != Vp.scale(vx.elementary(a, r)):
                bad.append("%s r=%d" % (lam, r))
    return not bad, {"failures": bad}


def _suite_gluing(ctx, size, D):
    bad = []
    for lam in partitions_up_to(size):
        g = vx.gluing(lam, D, ctx)
        prod = None
        for b in lam.boxes():
            m = z_box(lam, b)
            f = TruncatedSeries.one(len(m.zexp), D)
            x = TruncatedSeries.monomial(m.zexp, m.coefficient(ctx.hbar, ctx.q), D)
            f = (f - x) * (f - x.scale(ctx.hbar)).invert()
            prod = f if prod is None else prod * f
        if g != prod:
            bad.append(str(lam))
    one = Partition([1])
    if vx.gluing(one, D, ctx) != vx.capped_expand(one, 0, 1, D, ctx):
        bad.append("(1) vs capped")
    return not bad, {"failures": bad}


def _suite_character(ctx, size):
    bad = []
    for lam in partitions_up_to(size):
        prof = column_profile(lam)
        for C in ch.enumerate_chambers(lam):
            for n in prof.contents():
                rhs = {}
                for b in lam.boxes_of_content(n):
                    rhs = ch.laurent_add(rhs, {ch.m_value(lam, b, C) + vx.beta(n): 1})
                if ch.capped_limit(lam, n, 1, C) != rhs:
                    bad.append("%s n=%d theta=%s" % (lam, n, list(map(str, C.theta))))
        Cp = ch.positive_chamber(lam)
        for n, r in _operators(lam):
            if vx.capped_expand(lam, n, r, 1, ctx).constant_term() != \
                    ch.laurent_eval(ch.capped_limit(lam, n, r, Cp), ctx.hbar):
                bad.append("%s n=%d r=%d constant term" % (lam, n, r))
    return not bad, {"failures": bad}


def _suite_slices(size):
    bad = []
    for lam in partitions_up_to(size):
        for b in lam.boxes():
            e = shift_vector(lam, p_box(lam, b))
            S = set(slice_boxes(lam, b))
            for b2 in lam.boxes():
                k = sum(x * y for x, y in zip(z_box(lam, b2).zexp, e))
                if k != (1 if b2 in S else 0):
                    bad.append("%s %d:%d" % ((lam,) + box_stats(lam, b)[:2]))
                    break
    return not bad, {"failures": bad}


def _suite_qde(ctx, size, D):
    bad = []
    for lam in partitions_up_to(size):
        for b in lam.boxes():
            if not vx.box_qde_defect(lam, b, D, ctx).is_zero():
                bad.append(str(lam))
    return not bad, {"failures": bad}


def _suite_independence(ctx, rng, parts_list, points):
    worst = 0.0
    for parts in parts_list:
        lam = Partition(parts)
        chs = ch.enumerate_chambers(lam)
        for n, r in _operators(lam):
            expr = vx.capped_expression(lam, n, r)
            for k in range(points):
                C = chs[k % len(chs)]
                z = ch.chamber_point(lam, C, rng)
                exact = expr.evaluate(z, ctx)
                approx = ch.chamber_expand(expr, C, 12, ctx).evaluate([float(x) for x in z])
                worst = max(worst, abs(approx - float(exact)) / max(1.0, abs(float(exact))))
    return worst < 1e-8, {"max_discrepancy": _fmt(worst)}


def _suite_monodromy(rng, size, samples, tol=1e-8):
    ctx = mo.NumericContext(0.3, 0.55, tol)
    worst = {"ratio_vs_formula": 0.0, "cocycle": 0.0, "periodicity": 0.0, "stab": 0.0}
    for lam in partitions_up_to(size):
        chs = ch.enumerate_chambers(lam)
        n = column_profile(lam).nvars
        for z in mo.sample_points(lam, rng, samples, n, ctx):
            for C1 in chs:
                for C2 in chs:
                    r = mo.monodromy_ratio(lam, C1, C2, z, ctx)
                    worst["ratio_vs_formula"] = max(worst["ratio_vs_formula"],
                                                    mo.rel_diff(r, mo.monodromy_formula(lam, C1, C2, z, ctx)))
                    af = mo.analytic_monodromy_formula(lam, C1, C2, z, ctx)
                    worst["stab"] = max(worst["stab"], mo.rel_diff(
                        af * ctx.hbar ** (-(C1.p - C2.p) / 2), mo.stab_ratio(lam, C1, C2, z, ctx)))
                worst["periodicity"] = max(worst["periodicity"], max(
                    mo.periodicity_defect(lam, C1, chs[0], z, i, ctx) for i in range(n)))
            worst["cocycle"] = max(worst["cocycle"],
                                   mo.cocycle_defect(lam, chs[0], chs[-1], chs[len(chs) // 2], z, ctx))
    ok = all(v < tol for v in worst.values())
    return ok, {k: _fmt(v) for k, v in worst.items()}


def selftest(quick=False, contexts=1, seed=7):
    size = 3 if quick else 4
    D = 3 if quick else 4
    report = {"mode": "quick" if quick else "full", "seed": seed, "suites": {}}
    rng = random.Random(seed)
    for k, (q, h) in enumerate(CONTEXTS[:contexts]):
        ctx = SpecializationContext(q, h)
        tag = "ctx%d(q=%s,hbar=%s)" % (k, q, h)
        suites = {
            "oracle": _suite_oracle(ctx, size + (0 if quick else 1), D),
            "capped_action": _suite_capped_action(ctx, size, D),
            "commutativity": _suite_commute(ctx, size, min(D, 3)),
            "eigenfunction": _suite_eigen(ctx, 2 if quick else 3, min(D, 3)),
            "gluing": _suite_gluing(ctx, size, D),
            "character": _suite_character(ctx, size),
            "qde_series": _suite_qde(ctx, size + (0 if quick else 1), D),
            "independence": _suite_independence(
                ctx, rng, [(2, 1)] if quick else [(2, 1), (2, 2), (3, 1)], 4 if quick else 20),
        }
        report["suites"][tag] = {name: {"pass": ok, "detail": det} for name, (ok, det) in suites.items()}
    ok, det = _suite_slices(4 if quick else 8)
    report["suites"]["slices"] = {"pass": ok, "detail": det}
    ok, det = _suite_monodromy(rng, 2 if quick else 3, 2 if quick else 3)
    report["suites"]["monodromy"] = {"pass": ok, "detail": det}
    passes = []
    for v in report["suites"].values():
        if "pass" in v:
            passes.append(v["pass"])
        else:
            passes.extend(s["pass"] for s in v.values())
    report["pass"] = all(passes)
    return report


def cmd_selftest(args):
    if not 1 <= args.contexts <= len(CONTEXTS):
        raise UsageError("--contexts must be between 1 and %d" % len(CONTEXTS))
    rep = selftest(args.quick, args.contexts, args.seed)
    return rep, EXIT_OK if rep["pass"] else EXIT_VERIFY


# ----------------------------------------------------------------------

def build_parser():
    common = Parser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)
    p = Parser(prog="quiver-vertex", description="Vertex functions of type-A quiver varieties X_lambda.")
    p.add_argument("--output", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)
    sub.add_parser = add_parser

    def exact(sp):
        sp.add_argument("--q", default="3/7")
        sp.add_argument("--hbar", default="5/11")

    s = sub.add_parser("vertex", help="vertex function series")
    s.add_argument("-p", "--partition", required=True)
    s.add_argument("-D", "--degree", type=int, default=4)
    s.add_argument("--method", choices=("product", "localization", "both"), default="product")
    exact(s)
    s.set_defaults(func=cmd_vertex)

    s = sub.add_parser("capped", help="capped vertex with a descendant g_{n,r}")
    s.add_argument("-p", "--partition", required=True)
    s.add_argument("-n", "--node", type=int, default=0)
    s.add_argument("-r", "--rank", type=int, default=1)
    s.add_argument("--series", action="store_true")
    s.add_argument("-D", "--degree", type=int, default=4)
    s.add_argument("--eval", help="z-1=1/3,z0=2/7,...")
    exact(s)
    s.set_defaults(func=cmd_capped)

    s = sub.add_parser("chamber", help="classify a stability direction or list all chambers")
    s.add_argument("-p", "--partition", required=True)
    s.add_argument("--theta")
    s.add_argument("--enumerate", action="store_true")
    s.set_defaults(func=cmd_chamber)

    s = sub.add_parser("character", help="tautological character in a chamber")
    s.add_argument("-p", "--partition", required=True)
    s.add_argument("-n", "--node", type=int, default=0)
    s.add_argument("-r", "--rank", type=int, default=1)
    s.add_argument("--theta")
    s.set_defaults(func=cmd_character)

    s = sub.add_parser("monodromy", help="numeric monodromy checks between two chambers")
    s.add_argument("-p", "--partition", required=True)
    s.add_argument("--theta1", required=True)
    s.add_argument("--theta2", required=True)
    s.add_argument("--q", default="0.3")
    s.add_argument("--hbar", default="0.55")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--seed", type=int, default=7)
    s.set_defaults(func=cmd_monodromy)

    s = sub.add_parser("selftest", help="run the verification suites")
    s.add_argument("--quick", action="store_true")
    s.add_argument("--contexts", type=int, default=1)
    s.add_argument("--seed", type=int, default=7)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        res, code = args.func(args)
    except UsageError as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_USAGE
    except GuardError as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_USAGE
    emit(res, args.output, out)
    return code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
