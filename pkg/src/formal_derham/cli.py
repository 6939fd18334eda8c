"""Command-line front end.

    formal-derham d --chart 0,1 "y1^3"
    formal-derham pair --chart 0,1 --cap 3 "y1^2" "pw-unit*(ys1^2)"
    formal-derham betti --chart 1,1 --capx 2 --capy 2 --kind forms --augmented
    formal-derham selftest

Exit codes: 0 success, 1 mathematical failure, 2 usage or parse error.
"""

import argparse
import json
import sys

from .coeffs import FormalFunction
from .currents import (DeltaCurrent, DensityCurrent, RepresentationOverflow,
                       d_current, pair, regular_generalized)
from .forms import Chart, ChartMorphism, FormalForm, d as d_form, pullback, wedge
from .textio import (ChartIndexError, ParseError, format_any, format_rational,
                     parse_any, parse_current, parse_form, parse_poly, to_json,
                     var_names)


class UsageError(Exception):
    pass


class MathFailure(Exception):
    pass


def _ints(text, count, what):
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError("%s must be %d comma-separated integers, got %r" % (what, count, text))
    if len(vals) != count or any(v < 0 for v in vals):
        raise UsageError("%s must be %d nonnegative integers, got %r" % (what, count, text))
    return vals


def _chart(args, cap=None):
    n, k = _ints(args.chart, 2, "--chart")
    return Chart(n, k, args.cap if cap is None else cap)


def _emit(args, obj, extra=None):
    if args.format == "json":
        payload = to_json(obj) if not isinstance(obj, dict) else obj
        if extra:
            payload = dict(payload, **extra)
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(format_any(obj))
        for key, val in (extra or {}).items():
            print("%s: %s" % (key, val))


# ------------------------------------------------------------ commands

def cmd_d(args):
    chart = _chart(args)
    obj = parse_any(args.expr, chart)
    if isinstance(obj, FormalForm):
        if obj.r >= chart.n + chart.k:
            out = FormalForm.zero(chart, obj.r)   # top degree: d is zero
        else:
            out = d_form(obj)
    else:
        if obj.r == 0:
            raise MathFailure("d of a current of dual degree 0 leaves the complex")
        out = d_current(obj)
    _emit(args, out)


def cmd_wedge(args):
    chart = _chart(args)
    out = wedge(parse_form(args.left, chart), parse_form(args.right, chart))
    _emit(args, out)


def cmd_pair(args):
    chart = _chart(args)
    omega = parse_form(args.form, chart)
    eta = parse_current(args.current, chart)
    if omega.r != eta.r:
        raise MathFailure("a %d-form pairs with currents of dual degree %d, got %d"
                          % (omega.r, omega.r, eta.r))
    value = pair(omega, eta)
    if args.format == "json":
        print(json.dumps({"kind": "rational", "value": format_rational(value)}))
    else:
        print(format_rational(value))


def _parse_map(text, source, target):
    """``x1=...;y1=...`` images of the target coordinates on the source chart."""
    names = var_names(source.n, source.k)
    images = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise UsageError("map entries look like x1=<poly>; got %r" % part)
        lhs, rhs = (s.strip() for s in part.split("=", 1))
        images[lhs] = FormalFunction(source.n, source.k, source.cap, parse_poly(rhs, names))
    # unmapped coordinates default to the same-named source coordinate
    def image(name, i, have, make):
        if name in images:
            return images.pop(name)
        if i <= have:
            return make(i)
        raise UsageError("target coordinate %s needs an image" % name)

    xs = [image("x%d" % i, i, source.n, source.x) for i in range(1, target.n + 1)]
    ys = [image("y%d" % j, j, source.k, source.y) for j in range(1, target.k + 1)]
    if images:
        raise UsageError("unknown target coordinates: %s" % ", ".join(sorted(images)))
    return ChartMorphism(source, target, xs, ys)


def cmd_pullback(args):
    source = _chart(args)
    tn, tk = _ints(args.target, 2, "--target") if args.target else (source.n, source.k)
    target = Chart(tn, tk, args.cap)
    phi = _parse_map(args.map, source, target)
    omega = parse_form(args.form, target)
    _emit(args, pullback(phi, omega))


def cmd_kunneth(args):
    from .kunneth import boxtimes, psi_pair
    n1, k1, n2, k2 = _ints(args.charts, 4, "--charts")
    c1 = Chart(n1, k1, args.cap)
    c2 = Chart(n2, k2, args.cap)
    if args.op == "psi":
        out = psi_pair(parse_form(args.left, c1), parse_form(args.right, c2))
    else:
        out = boxtimes(parse_current(args.left, c1), parse_current(args.right, c2))
    _emit(args, out)


def cmd_primitive(args):
    from . import homotopy
    chart = _chart(args)
    kind = args.complex
    if kind == "forms":
        con = homotopy.contract_forms(chart.n, chart.k, chart.cap)
        obj = parse_form(args.expr, chart)
    elif kind == "density":
        con = homotopy.contract_density(chart.n, chart.k, None, chart.cap)
        obj = parse_current(args.expr, chart)
        if not isinstance(obj, DensityCurrent):
            raise UsageError("the density complex needs a density current")
    elif kind == "dist":
        con = homotopy.contract_distributions(chart.n, chart.k, chart.cap)
        obj = parse_current(args.expr, chart)
        if not isinstance(obj, DeltaCurrent):
            raise UsageError("the distribution complex needs delta terms")
    else:
        # a form enters as the regular generalized function it defines
        con = homotopy.contract_generalized(chart.n, chart.k, None, chart.cap)
        obj = regular_generalized(parse_form(args.expr, chart))
    dx = con.d(obj)
    if dx is not None and not con.is_zero(dx):
        raise MathFailure("input is not closed; no primitive exists")
    prim = con.h(obj)
    residual = con.include(con.project(obj)) if con.degree(obj) == 0 else None
    if kind == "gen":
        if not con.check_identity(obj):
            raise MathFailure("homotopy identity failed on this input")
        print("primitive: <functional on densities of dual degree %d>" % prim.r
              if prim is not None else "primitive: none (lowest degree)")
        if residual is not None:
            print("augmentation: %s" % format_rational(con.project(obj)))
        return
    check = con.defect(obj)
    if check is not None and not con.is_zero(check):
        raise MathFailure("homotopy identity failed on this input")
    extra = {}
    if residual is not None:
        extra["residual"] = format_any(residual)
        extra["augmentation"] = format_rational(con.project(obj))
    if prim is None:
        print("primitive: none (lowest degree)")
        for key, val in extra.items():
            print("%s: %s" % (key, val))
        return
    if args.format == "json":
        _emit(args, prim, extra)
    else:
        print("primitive: " + format_any(prim))
        for key, val in extra.items():
            print("%s: %s" % (key, val))


def cmd_betti(args):
    from .complexes import assemble, betti
    n, k = _ints(args.chart, 2, "--chart")
    c = assemble((n, k), args.capx, args.capy, args.kind, args.augmented,
                 truncation=args.truncation, window=args.window)
    if not c.check_d_squared():
        raise MathFailure("assembled complex has d^2 != 0")
    bs = betti(c)
    lines = [("chart", "%d,%d" % (n, k)), ("kind", args.kind),
             ("augmented", "yes" if args.augmented else "no"),
             ("capx", args.capx), ("capy", args.capy),
             ("degrees", "%d..%d" % (c.lo, c.hi)),
             ("dims", ",".join(str(v) for v in c.dims())),
             ("betti", ",".join(str(v) for v in bs)),
             ("exact", "yes" if not any(bs) else "no")]
    if args.format == "json":
        print(json.dumps({k_: str(v) for k_, v in lines}, sort_keys=True))
    else:
        for key, val in lines:
            print("%s=%s" % (key, val))


def cmd_selftest(args):
    from .acceptance import run_all
    only = set(_ints(args.only, len(args.only.split(",")), "--only")) if args.only else None
    results = run_all(seed=args.seed, only=only, out=sys.stdout)
    passed = sum(r.passed for r in results)
    print("selftest: %d/%d suites passed (seed %d)" % (passed, len(results), args.seed))
    if passed != len(results):
        raise MathFailure("selftest failed")


# -------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="formal-derham",
                description="Exact de Rham complexes on formal charts.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--cap", type=int, default=4, help="y-degree cap (default 4)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("d", parents=[common], help="apply d to a form or current")
    s.add_argument("--chart", required=True)
    s.add_argument("expr")
    s.set_defaults(fn=cmd_d)

    s = sub.add_parser("wedge", parents=[common], help="wedge two forms")
    s.add_argument("--chart", required=True)
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(fn=cmd_wedge)

    s = sub.add_parser("pair", parents=[common], help="pair a form with a current")
    s.add_argument("--chart", required=True)
    s.add_argument("form")
    s.add_argument("current")
    s.set_defaults(fn=cmd_pair)

    s = sub.add_parser("pullback", parents=[common], help="pull a form back along a chart map")
    s.add_argument("--chart", required=True, help="source chart n,k")
    s.add_argument("--target", help="target chart n,k (default: the source)")
    s.add_argument("--map", required=True,
                   help="images of target coordinates, e.g. 'x1=x1+x1*y1;y1=2*y1'")
    s.add_argument("form")
    s.set_defaults(fn=cmd_pullback)

    s = sub.add_parser("kunneth", parents=[common], help="psi of forms or boxtimes of currents")
    s.add_argument("op", choices=("psi", "box"))
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--charts", required=True, help="n1,k1,n2,k2")
    s.set_defaults(fn=cmd_kunneth)

    s = sub.add_parser("primitive", parents=[common], help="apply the contracting homotopy")
    s.add_argument("--chart", required=True)
    s.add_argument("--complex", choices=("forms", "density", "dist", "gen"), default="forms")
    s.add_argument("expr")
    s.set_defaults(fn=cmd_primitive)

    s = sub.add_parser("betti", parents=[common], help="Betti numbers of a truncated complex")
    s.add_argument("--chart", required=True)
    s.add_argument("--capx", type=int, default=6)
    s.add_argument("--capy", type=int, default=4)
    s.add_argument("--kind", choices=("forms", "density"), default="forms")
    s.add_argument("--augmented", action="store_true")
    s.add_argument("--truncation", choices=("weight", "coefficient"), default="weight")
    s.add_argument("--window", type=int, default=6, help="spline window [0,W] for densities")
    s.set_defaults(fn=cmd_betti)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--only", help="comma-separated suite numbers")
    s.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        args.fn(args)
        return 0
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except ChartIndexError as exc:
        print("index error: %s" % exc, file=sys.stderr)
        return 2
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except (MathFailure, RepresentationOverflow) as exc:
        print("failure: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
