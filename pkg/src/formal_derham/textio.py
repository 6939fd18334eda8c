"""Text grammar for forms and currents: printer and parser.

Forms::

    (2*x1*y1) dx1^dy1 + (1/3) dx2        x1^2 + 1        0

Currents (dxs/dys are dual covectors, ys are dual formal variables)::

    pw[(0,1,2); x; 2 - x]*(ys1^2) dxs1
    pw1[(0,1); x1]*pw2[(0,1); 1] dnil
    pw-unit*(ys1^2)
    (-1/2)*delta(a=1; dx=1; ys1) dxs1

A current term without dual covectors carries the full dual volume (dual
degree 0); ``dnil`` names the empty dual index.  ``pw[...]`` is a piece
list on axis 1, ``pwN[...]`` on axis N, and ``pw-unit`` is the default
unit bump on every axis not given explicitly.  Inside coefficients ``^``
is a power; between covectors it is the wedge.
"""

import re
from fractions import Fraction

from .coeffs import (DensityCoeff, FormalFunction, Poly, PwPoly, Q,
                     up_from_poly)
from .currents import DeltaCurrent, DensityCurrent
from .forms import FormalForm
from .indexcalc import BiIndex, enumerate_bi, merge_sign


class ParseError(ValueError):
    def __init__(self, msg, pos=None):
        if pos is not None:
            msg = "%s at position %d" % (msg, pos)
        super().__init__(msg)
        self.pos = pos


class ChartIndexError(ParseError):
    """An index that does not exist on the chart."""


def default_bump():
    """Quadratic cardinal B-spline on [0, 3]; integral 1, class C^1."""
    return PwPoly.bspline(2)


# ------------------------------------------------------------ printing

def _mono(exps, names):
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append("%s^%d" % (name, e))
    return "*".join(parts)


def format_poly(poly, names):
    """Graded order, highest degree first; '0' for the zero polynomial."""
    if not poly.terms:
        return "0"
    items = sorted(poly.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
    out = []
    for exps, c in items:
        m = _mono(exps, names)
        if not m:
            s = str(c)
        elif c == 1:
            s = m
        elif c == -1:
            s = "-" + m
        else:
            s = "%s*%s" % (c, m)
        if not out:
            out.append(s)
        elif s.startswith("-"):
            out.append(" - " + s[1:])
        else:
            out.append(" + " + s)
    return "".join(out)


def var_names(n, k):
    return ["x%d" % i for i in range(1, n + 1)] + ["y%d" % j for j in range(1, k + 1)]


def ystar_names(k):
    return ["ys%d" % j for j in range(1, k + 1)]


def bi_sort_key(bi):
    return (len(bi.y), bi.x, bi.y)


def format_basis(bi, dual=False, empty=""):
    xs = "dxs" if dual else "dx"
    ys = "dys" if dual else "dy"
    parts = ["%s%d" % (xs, i) for i in bi.x] + ["%s%d" % (ys, j) for j in bi.y]
    return "^".join(parts) if parts else empty


def format_function(f):
    return format_poly(f.poly, var_names(f.n, f.k))


def format_form(omega):
    if not omega.terms:
        return "0"
    names = var_names(omega.chart.n, omega.chart.k)
    parts = []
    for bi in sorted(omega.terms, key=bi_sort_key):
        coeff = format_poly(omega.terms[bi].poly, names)
        if bi.degree == 0:
            parts.append(coeff)
        else:
            parts.append("(%s) %s" % (coeff, format_basis(bi)))
    return " + ".join(parts)


def format_rational(c):
    return str(Q(c))


def format_pw(pw, axis=None):
    """``pw[(b0,b1,...); piece; ...]`` with variable x (or xN on axis N)."""
    var = "x" if axis is None else "x%d" % axis
    head = "pw" if axis is None else "pw%d" % axis
    bs = ",".join(str(b) for b in pw.breaks)
    pieces = [format_poly(Poly(1, {(i,): c for i, c in enumerate(p)}), [var])
              for p in pw.pieces]
    return "%s[(%s); %s]" % (head, bs, "; ".join(pieces))


def _dual_suffix(bi, chart):
    n, k = chart.n, chart.k
    if bi.degree == n + k:
        return ""
    if bi.degree == 0:
        return " dnil"
    return " " + format_basis(bi, dual=True)


def format_current(eta):
    if isinstance(eta, DensityCurrent):
        return _format_density(eta)
    if isinstance(eta, DeltaCurrent):
        return _format_delta(eta)
    raise TypeError("cannot format %r" % type(eta).__name__)


def _format_density(eta):
    chart = eta.chart
    n, k = chart.n, chart.k
    if not eta.terms:
        return "0"
    names = ystar_names(k)
    parts = []
    for bi in sorted(eta.terms, key=bi_sort_key):
        tau = eta.terms[bi]
        suffix = _dual_suffix(bi, chart)
        if n == 0:
            ypoly = Poly(k, {e: c for e, c in tau.cells.get((), Poly(k)).terms.items()})
            parts.append("(%s)%s" % (format_poly(ypoly, names), suffix))
            continue
        for pws, L, c in tau.elementary_terms():
            if n == 1:
                factors = [format_pw(pws[0])]
            else:
                factors = [format_pw(pw, axis=a + 1) for a, pw in enumerate(pws)]
            if any(L):
                factors.append("(%s)" % _mono(L, names))
            parts.append("*".join(factors) + suffix)
    return " + ".join(parts)


def _format_delta(eta):
    chart = eta.chart
    n, k = chart.n, chart.k
    if not eta.terms:
        return "0"
    names = ystar_names(k)
    parts = []
    for (a, alpha, L, bi), c in sorted(eta.terms.items(),
                                       key=lambda t: (bi_sort_key(t[0][3]), t[0])):
        inner = []
        if n:
            inner.append("a=" + ",".join(str(v) for v in a))
            inner.append("dx=" + ",".join(str(v) for v in alpha))
        inner.append(_mono(L, names) or "1")
        s = "delta(%s)" % "; ".join(inner)
        if c != 1:
            s = "(%s)*%s" % (c, s)
        parts.append(s + _dual_suffix(bi, chart))
    return " + ".join(parts)


def format_any(obj):
    if isinstance(obj, FormalForm):
        return format_form(obj)
    if isinstance(obj, (DensityCurrent, DeltaCurrent)):
        return format_current(obj)
    if isinstance(obj, (int, Fraction)):
        return format_rational(obj)
    raise TypeError("cannot format %r" % type(obj).__name__)


# ------------------------------------------------------------- lexing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<pw>pw(?P<pwaxis>\d*)\[)
  | (?P<unit>pw-unit(?P<unitaxis>\d*))
  | (?P<delta>delta\()
  | (?P<cov>dxs\d+|dys\d+|dx\d+|dy\d+|dnil)
  | (?P<var>ys\d+|x\d+|y\d+|x(?![a-z]))
  | (?P<num>\d+)
  | (?P<op>[-+*/^(),;=])
""", re.VERBOSE)


def _matching(src, start, open_ch, close_ch):
    depth = 1
    i = start
    while i < len(src):
        if src[i] == open_ch:
            depth += 1
        elif src[i] == close_ch:
            depth -= 1
            if depth == 0:
                return i
        i += 1
    raise ParseError("unbalanced %r" % open_ch, start)


def tokenize(src):
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError("unexpected character %r" % src[pos], pos)
        if m.group("ws"):
            pos = m.end()
            continue
        if m.group("pw"):
            end = _matching(src, m.end(), "[", "]")
            out.append(("pw", (m.group("pwaxis"), src[m.end():end]), pos))
            pos = end + 1
            continue
        if m.group("delta"):
            end = _matching(src, m.end(), "(", ")")
            out.append(("delta", src[m.end():end], pos))
            pos = end + 1
            continue
        if m.group("unit"):
            out.append(("unit", m.group("unitaxis"), pos))
        else:
            for kind in ("cov", "var", "num", "op"):
                if m.group(kind):
                    out.append((kind, m.group(kind), pos))
                    break
        pos = m.end()
    out.append(("end", None, len(src)))
    return out


class _Stream:
    def __init__(self, src):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind, value=None):
        t = self.peek()
        if t[0] == kind and (value is None or t[1] == value):
            self.i += 1
            return t
        return None

    def expect(self, kind, value=None):
        t = self.accept(kind, value)
        if t is None:
            got = self.peek()
            raise ParseError("expected %s, found %r" % (value or kind, got[1]), got[2])
        return t


# ----------------------------------------------------- polynomial parser

class _PolyParser:
    """Recursive descent over + - * / ^ with a variable resolver."""

    def __init__(self, stream, nvars, resolve):
        self.s = stream
        self.nvars = nvars
        self.resolve = resolve

    def expr(self):
        s = self.s
        neg = bool(s.accept("op", "-"))
        if not neg:
            s.accept("op", "+")
        acc = self.product()
        if neg:
            acc = -acc
        while True:
            if s.accept("op", "+"):
                acc = acc + self.product()
            elif s.peek()[:2] == ("op", "-"):
                s.next()
                acc = acc - self.product()
            else:
                return acc

    def product(self):
        acc = self.power()
        s = self.s
        while True:
            t = s.peek()
            if t[:2] == ("op", "*") and self._starts_factor(s.peek(1)):
                s.next()
                acc = acc * self.power()
            elif t[:2] == ("op", "/"):
                s.next()
                den = self.power()
                if len(den.terms) != 1 or any(any(e) for e in den.terms):
                    raise ParseError("can only divide by a nonzero number", t[2])
                acc = acc.scale(1 / next(iter(den.terms.values())))
            else:
                return acc

    def _starts_factor(self, t):
        return t[0] in ("num", "var") or t[:2] == ("op", "(") or t[:2] == ("op", "-")

    def power(self):
        base = self.atom()
        s = self.s
        if s.peek()[:2] == ("op", "^") and s.peek(1)[0] == "num":
            s.next()
            base = base ** int(s.next()[1])
        return base

    def atom(self):
        s = self.s
        t = s.peek()
        if t[0] == "num":
            s.next()
            return Poly.const(self.nvars, int(t[1]))
        if t[0] == "var":
            s.next()
            return Poly.var(self.nvars, self.resolve(t[1], t[2]))
        if t[:2] == ("op", "("):
            s.next()
            inner = self.expr()
            s.expect("op", ")")
            return inner
        if t[:2] == ("op", "-"):
            s.next()
            return -self.power()
        raise ParseError("expected a number, variable or '('", t[2])


def _form_resolver(n, k):
    def resolve(name, pos):
        if name.startswith("x") and name[1:]:
            i = int(name[1:])
            if 1 <= i <= n:
                return i - 1
        elif name.startswith("y") and not name.startswith("ys"):
            j = int(name[1:])
            if 1 <= j <= k:
                return n + j - 1
        raise ChartIndexError("variable %s is not on chart (%d,%d)" % (name, n, k), pos)
    return resolve


def _ystar_resolver(k):
    def resolve(name, pos):
        if name.startswith("ys"):
            j = int(name[2:])
            if 1 <= j <= k:
                return j - 1
        raise ChartIndexError("variable %s is not a ys variable of this chart" % name, pos)
    return resolve


def parse_poly(src, names):
    """Parse a polynomial in the given variable names (used for pieces)."""
    index = {nm: i for i, nm in enumerate(names)}

    def resolve(name, pos):
        if name not in index:
            raise ParseError("unknown variable %s" % name, pos)
        return index[name]

    s = _Stream(src)
    p = _PolyParser(s, len(names), resolve).expr()
    s.expect("end")
    return p


def _covectors(s, n, k, dual):
    """Parse cov ('^' cov)*; returns (sign, BiIndex) or None."""
    t = s.peek()
    if t[0] != "cov":
        return None
    xs, ys = ("dxs", "dys") if dual else ("dx", "dy")
    seq = []
    first = True
    nil = False
    while first or (s.peek()[:2] == ("op", "^") and s.peek(1)[0] == "cov"):
        if not first:
            s.next()
        first = False
        tok = s.next()
        name, pos = tok[1], tok[2]
        if name == "dnil":
            nil = True
            continue
        m = re.fullmatch(r"(dxs|dys|dx|dy)(\d+)", name)
        kind, idx = m.group(1), int(m.group(2))
        if kind not in (xs, ys):
            raise ParseError("%s is not allowed here" % name, pos)
        if kind == xs:
            if not 1 <= idx <= n:
                raise ChartIndexError("%s is not on chart (%d,%d)" % (name, n, k), pos)
            seq.append(BiIndex((idx,), ()))
        else:
            if not 1 <= idx <= k:
                raise ChartIndexError("%s is not on chart (%d,%d)" % (name, n, k), pos)
            seq.append(BiIndex((), (idx,)))
    if nil and seq:
        raise ParseError("dnil cannot be combined with other covectors", t[2])
    sign, acc = 1, BiIndex((), ())
    for b in seq:
        sg, merged = merge_sign(acc, b)
        if sg == 0:
            return 0, BiIndex(tuple(sorted(set(acc.x) | set(b.x))),
                              tuple(sorted(set(acc.y) | set(b.y)))), len(seq)
        sign *= sg
        acc = merged
    return sign, acc, len(seq)


# ---------------------------------------------------------- form parser

def parse_form(src, chart):
    """Parse the form grammar on a chart into a normalized FormalForm."""
    n, k = chart.n, chart.k
    s = _Stream(src)
    pp = _PolyParser(s, n + k, _form_resolver(n, k))
    total = None
    first = True
    while True:
        t = s.peek()
        if t[0] == "end":
            if first:
                raise ParseError("empty expression", t[2])
            break
        sign = 1
        if s.accept("op", "-"):
            sign = -1
        elif not first:
            s.expect("op", "+")
            if s.accept("op", "-"):
                sign = -1
        first = False
        coeff = None
        if s.peek()[0] != "cov":
            coeff = pp.product()
            s.accept("op", "*")
        cov = _covectors(s, n, k, dual=False)
        if cov is None:
            bsign, bi, r = 1, BiIndex((), ()), 0
        else:
            bsign, bi, r = cov
        poly = coeff if coeff is not None else Poly.const(n + k, 1)
        f = FormalFunction(n, k, chart.cap, poly.scale(sign * bsign))
        term = FormalForm(chart, r, {bi: f} if bsign else {})
        if total is None:
            total = term
        else:
            if total.r != term.r:
                raise ParseError("terms of different degrees (%d and %d)"
                                 % (total.r, term.r), t[2])
            total = total + term
            if not total.terms:
                total = FormalForm.zero(chart, term.r)
    return total


# ------------------------------------------------------- current parser

def _parse_pw(axis_text, body, n, pos):
    axis = int(axis_text) if axis_text else 1
    if not 1 <= axis <= n:
        raise ChartIndexError("pw axis %d is not on a chart with n=%d" % (axis, n), pos)
    parts = [p.strip() for p in body.split(";")]
    head = parts[0]
    if not (head.startswith("(") and head.endswith(")")):
        raise ParseError("pw literal needs a breakpoint tuple first", pos)
    try:
        breaks = [_parse_rational(b) for b in head[1:-1].split(",") if b.strip()]
    except ParseError:
        raise ParseError("bad breakpoint list in pw literal", pos)
    pieces = parts[1:]
    if len(breaks) < 2 or len(pieces) != len(breaks) - 1:
        raise ParseError("pw literal needs one piece per interval", pos)
    names = ["x", "x%d" % axis]
    dense = []
    for p in pieces:
        poly = parse_poly(p, names)
        merged = Poly(1, {})
        for e, c in poly.terms.items():
            merged = merged + Poly(1, {(e[0] + e[1],): c})
        dense.append(up_from_poly(merged))
    try:
        return axis, PwPoly(breaks, dense)
    except ValueError as exc:
        raise ParseError(str(exc), pos)


def _parse_rational(text):
    text = text.strip()
    m = re.fullmatch(r"-?\d+(/\d+)?", text)
    if not m:
        raise ParseError("bad rational %r" % text)
    return Fraction(text)


def _parse_delta(body, n, k, pos):
    a = [Fraction(0)] * n
    alpha = [0] * n
    ypoly = Poly.const(k, 1)
    for part in (p.strip() for p in body.split(";")):
        if not part:
            continue
        if part.startswith("a="):
            vals = [v for v in part[2:].split(",") if v.strip()]
            if len(vals) != n:
                raise ParseError("delta point needs %d coordinates" % n, pos)
            a = [_parse_rational(v) for v in vals]
        elif part.startswith("dx="):
            vals = [v for v in part[3:].split(",") if v.strip()]
            if len(vals) != n or not all(v.strip().isdigit() for v in vals):
                raise ParseError("delta derivative order needs %d integers" % n, pos)
            alpha = [int(v) for v in vals]
        else:
            s = _Stream(part)
            ypoly = _PolyParser(s, k, _ystar_resolver(k)).expr()
            s.expect("end")
    return tuple(a), tuple(alpha), ypoly


def parse_current(src, chart, bump=None):
    """Parse the current grammar into a DensityCurrent or DeltaCurrent."""
    n, k = chart.n, chart.k
    bump = bump or default_bump()
    s = _Stream(src)
    total = None
    first = True
    while True:
        t = s.peek()
        if t[0] == "end":
            if first:
                raise ParseError("empty expression", t[2])
            break
        sign = 1
        if s.accept("op", "-"):
            sign = -1
        elif not first:
            s.expect("op", "+")
            if s.accept("op", "-"):
                sign = -1
        first = False
        term = _parse_current_term(s, chart, bump, sign)
        if total is None:
            total = term
        else:
            if type(total) is not type(term):
                raise ParseError("cannot mix densities and point masses", t[2])
            if total.r != term.r:
                raise ParseError("terms of different dual degrees", t[2])
            total = total + term
    return total


def _parse_current_term(s, chart, bump, sign):
    n, k = chart.n, chart.k
    scalar = Fraction(sign)
    ypoly = Poly.const(k, 1)
    axes = {}
    unit = False
    delta = None
    start = s.peek()[2]
    while True:
        t = s.peek()
        if t[0] == "pw":
            s.next()
            axis, pw = _parse_pw(t[1][0], t[1][1], n, t[2])
            if axis in axes:
                raise ParseError("axis %d given twice" % axis, t[2])
            axes[axis] = pw
        elif t[0] == "unit":
            s.next()
            if t[1]:
                axis = int(t[1])
                if not 1 <= axis <= n:
                    raise ChartIndexError("pw-unit axis %d is not on the chart" % axis, t[2])
                if axis in axes:
                    raise ParseError("axis %d given twice" % axis, t[2])
                axes[axis] = bump
            else:
                unit = True
        elif t[0] == "delta":
            s.next()
            if delta is not None:
                raise ParseError("one delta per term", t[2])
            delta = _parse_delta(t[1], n, k, t[2])
        elif t[0] == "num":
            s.next()
            v = Fraction(int(t[1]))
            if s.accept("op", "/"):
                v /= int(s.expect("num")[1])
            scalar *= v
        elif t[0] == "var" or t[:2] == ("op", "("):
            pp = _PolyParser(s, k, _ystar_resolver(k))
            ypoly = ypoly * pp.power()
        else:
            raise ParseError("expected a current factor", t[2])
        if not s.accept("op", "*"):
            break
    cov = _covectors(s, n, k, dual=True)
    if cov is None:
        bsign, bi = 1, BiIndex(tuple(range(1, n + 1)), tuple(range(1, k + 1)))
    else:
        bsign, bi, _ = cov
    r = n + k - bi.degree
    scalar *= bsign
    if delta is not None:
        if axes or unit:
            raise ParseError("a delta term cannot carry pw factors", start)
        a, alpha, dpoly = delta
        full = dpoly * ypoly
        terms = {}
        for L, c in full.terms.items():
            terms[(a, alpha, L, bi)] = c * scalar
        return DeltaCurrent(chart, r, terms)
    pws = []
    for axis in range(1, n + 1):
        if axis in axes:
            pws.append(axes[axis])
        elif unit:
            pws.append(bump)
        else:
            raise ParseError("density term has no factor on axis %d" % axis, start)
    tau = DensityCoeff.from_tensor(pws, ypoly.scale(scalar)) if bsign else \
        DensityCoeff.zero(n, k)
    return DensityCurrent(chart, r, {bi: tau})


def parse_any(src, chart, bump=None):
    """A form unless the source uses current syntax."""
    toks = tokenize(src)
    if any(t[0] in ("pw", "unit", "delta") or
           (t[0] == "cov" and (t[1].startswith(("dxs", "dys")) or t[1] == "dnil")) or
           (t[0] == "var" and t[1].startswith("ys"))
           for t in toks):
        return parse_current(src, chart, bump)
    return parse_form(src, chart)


# --------------------------------------------------------------- json

def to_json(obj):
    if isinstance(obj, FormalForm):
        chart = obj.chart
        names = var_names(chart.n, chart.k)
        return {
            "kind": "form",
            "chart": [chart.n, chart.k, chart.cap],
            "degree": obj.r,
            "text": format_form(obj),
            "terms": [{"basis": format_basis(bi),
                       "coeff": format_poly(obj.terms[bi].poly, names)}
                      for bi in sorted(obj.terms, key=bi_sort_key)],
        }
    if isinstance(obj, (DensityCurrent, DeltaCurrent)):
        chart = obj.chart
        kind = "density" if isinstance(obj, DensityCurrent) else "delta"
        return {"kind": kind, "chart": [chart.n, chart.k, chart.cap],
                "dual_degree": obj.r, "text": format_current(obj)}
    return {"kind": "rational", "value": format_rational(obj)}
