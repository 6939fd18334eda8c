"""Exact coefficient rings.

Everything here is over ``fractions.Fraction``.

* ``Poly``: sparse multivariate polynomial, a dict from exponent tuples
  to nonzero rationals.
* ``FormalFunction``: a polynomial in x1..xn, y1..yk whose total y-degree
  is capped; products drop the excess and remember that they did.
* ``PwPoly``: compactly supported piecewise polynomial on the line.
* ``DensityCoeff``: compactly supported piecewise polynomial on a
  rectangular grid in R^n, with polynomial dependence on dual variables
  ys1..ysk.
"""

from bisect import bisect_right
from fractions import Fraction
from itertools import product as iproduct
from math import factorial, inf


def Q(v):
    """Coerce ints, strings and Fractions to Fraction."""
    if isinstance(v, Fraction):
        return v
    return Fraction(v)


def multi_factorial(exps):
    out = 1
    for e in exps:
        out *= factorial(e)
    return out


# ---------------------------------------------------------------- Poly

class Poly:
    """Sparse polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        else:
            self.terms = {e: Q(c) for e, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already Fraction-valued and nonzero
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def const(cls, nvars, c=1):
        c = Q(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars, i, power=1):
        e = [0] * nvars
        e[i] = power
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps, c=1):
        c = Q(c)
        return cls._raw(len(exps), {tuple(exps): c} if c else {})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return "Poly(%d, %r)" % (self.nvars, self.terms)

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomial arity mismatch: %d vs %d"
                             % (self.nvars, other.nvars))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        if not c:
            return Poly(self.nvars)
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, m):
        out = Poly.const(self.nvars, 1)
        for _ in range(m):
            out = out * self
        return out

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            p = e[i]
            if p:
                ne = e[:i] + (p - 1,) + e[i + 1:]
                out[ne] = c * p
        return Poly._raw(self.nvars, out)

    def antidiff(self, i):
        """Antiderivative in variable i vanishing at x_i = 0."""
        out = {}
        for e, c in self.terms.items():
            p = e[i] + 1
            out[e[:i] + (p,) + e[i + 1:]] = c / p
        return Poly._raw(self.nvars, out)

    def substitute(self, i, value):
        """Set variable i to a number; the variable stays with exponent 0."""
        value = Q(value)
        out = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            v = c * value ** e[i] if e[i] else c
            out[ne] = out.get(ne, 0) + v
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(point, e):
                if p:
                    v *= x ** p
            total += v
        return total

    def degree(self, lo=0, hi=None):
        """Largest total degree in the variable block [lo, hi)."""
        hi = self.nvars if hi is None else hi
        return max((sum(e[lo:hi]) for e in self.terms), default=-1)

    def integrate_box(self, bounds):
        """Integrate variables over intervals; ``bounds`` maps var -> (lo, hi)."""
        out = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, (lo, hi) in bounds.items():
                p = e[i] + 1
                v *= (hi ** p - lo ** p) / p
                ne[i] = 0
            if v:
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + v
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def relabel(self, nvars, mapping):
        """Move variable i to slot mapping[i] in a ring with ``nvars`` vars."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, p in enumerate(e):
                if p:
                    ne[mapping[i]] += p
            out[tuple(ne)] = c
        return Poly._raw(nvars, out)

    def compose(self, images, nvars):
        """Substitute images[i] (Polys in ``nvars`` vars) for variable i."""
        cache = {}

        def power(i, p):
            key = (i, p)
            if key not in cache:
                cache[key] = images[i] ** p
            return cache[key]

        out = Poly(nvars)
        for e, c in self.terms.items():
            term = Poly.const(nvars, c)
            for i, p in enumerate(e):
                if p:
                    term = term * power(i, p)
            out = out + term
        return out


# ------------------------------------------------------ FormalFunction

class FormalFunction:
    """Element of Q[x1..xn][y1..yk] truncated at total y-degree ``cap``.

    Variables are ordered x1..xn, y1..yk inside the underlying Poly.
    ``truncated`` is sticky: it records that some product dropped a
    nonzero term of y-degree above the cap.
    """

    __slots__ = ("n", "k", "cap", "poly", "truncated")

    def __init__(self, n, k, cap, poly=None, truncated=False):
        self.n = n
        self.k = k
        self.cap = cap
        if poly is None:
            poly = Poly(n + k)
        elif not isinstance(poly, Poly):
            poly = Poly(n + k, poly)
        if poly.nvars != n + k:
            raise ValueError("polynomial has %d vars, chart needs %d"
                             % (poly.nvars, n + k))
        dropped = False
        if poly.terms and k:
            keep = {}
            for e, c in poly.terms.items():
                if sum(e[n:]) > cap:
                    dropped = True
                else:
                    keep[e] = c
            if dropped:
                poly = Poly._raw(n + k, keep)
        self.poly = poly
        self.truncated = truncated or dropped

    @classmethod
    def const(cls, n, k, cap, c=1):
        return cls(n, k, cap, Poly.const(n + k, c))

    @classmethod
    def x(cls, n, k, cap, i, power=1):
        return cls(n, k, cap, Poly.var(n + k, i - 1, power))

    @classmethod
    def y(cls, n, k, cap, j, power=1):
        return cls(n, k, cap, Poly.var(n + k, n + j - 1, power))

    def like(self, poly, truncated=False):
        return FormalFunction(self.n, self.k, self.cap, poly,
                              self.truncated or truncated)

    def is_zero(self):
        return not self.poly.terms

    def __bool__(self):
        return bool(self.poly.terms)

    def __eq__(self, other):
        if isinstance(other, FormalFunction):
            return (self.n, self.k) == (other.n, other.k) and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == other
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.k, self.poly))

    def __repr__(self):
        return "FormalFunction(%d, %d, cap=%d, %r)" % (
            self.n, self.k, self.cap, self.poly.terms)

    def _check(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("formal functions live on different charts: "
                             "(%d,%d) vs (%d,%d)"
                             % (self.n, self.k, other.n, other.k))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.like(self.poly + other)
        self._check(other)
        return FormalFunction(self.n, self.k, min(self.cap, other.cap),
                              self.poly + other.poly,
                              self.truncated or other.truncated)

    __radd__ = __add__

    def __neg__(self):
        return self.like(-self.poly)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self.like(self.poly.scale(c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return ff_mul(self, other)

    __rmul__ = __mul__

    def partial(self, which):
        return ff_partial(self, which)

    def y_degree(self):
        return self.poly.degree(self.n, self.n + self.k)

    def y_components(self):
        """Map from y-exponent L to the x-polynomial f_L (n vars)."""
        out = {}
        n = self.n
        for e, c in self.poly.terms.items():
            L = e[n:]
            out.setdefault(L, {})[e[:n]] = c
        return {L: Poly._raw(n, t) for L, t in out.items()}

    def coefficient(self, L):
        n = self.n
        L = tuple(L)
        return Poly._raw(n, {e[:n]: c for e, c in self.poly.terms.items()
                             if e[n:] == L})

    def evaluate_x(self, point):
        """Substitute numbers for the x's, leaving a Poly in the y's."""
        n = self.n
        out = {}
        for e, c in self.poly.terms.items():
            v = c
            for a, p in zip(point, e[:n]):
                if p:
                    v *= Q(a) ** p
            if v:
                L = e[n:]
                out[L] = out.get(L, 0) + v
        return Poly._raw(self.k, {L: c for L, c in out.items() if c})


def ff_mul(a, b):
    """Product truncated at the smaller cap, flagging dropped terms."""
    a._check(b)
    n, k = a.n, a.k
    cap = min(a.cap, b.cap)
    kept = {}
    dropped = {}
    for e1, c1 in a.poly.terms.items():
        d1 = sum(e1[n:])
        for e2, c2 in b.poly.terms.items():
            e = tuple(p + q for p, q in zip(e1, e2))
            target = kept if d1 + sum(e2[n:]) <= cap else dropped
            target[e] = target.get(e, 0) + c1 * c2
    flag = a.truncated or b.truncated or any(c for c in dropped.values())
    poly = Poly._raw(n + k, {e: c for e, c in kept.items() if c})
    return FormalFunction(n, k, cap, poly, flag)


def _axis(f, which):
    # which is ("x", i) or ("y", j), both 1-based
    kind, idx = which
    if kind == "x" and 1 <= idx <= f.n:
        return idx - 1
    if kind == "y" and 1 <= idx <= f.k:
        return f.n + idx - 1
    raise IndexError("axis %s%s outside chart (%d,%d)" % (kind, idx, f.n, f.k))


def ff_partial(f, which):
    """Partial derivative along ("x", i) or ("y", j); never truncates."""
    return f.like(f.poly.diff(_axis(f, which)))


# ------------------------------------------------ univariate helpers
# dense coefficient tuples, lowest degree first, no trailing zeros

def up_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def up_add(a, b):
    m = max(len(a), len(b))
    return up_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                    for i in range(m)])


def up_scale(a, s):
    return up_trim([c * s for c in a])


def up_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return up_trim(out)


def up_diff(a):
    return up_trim([a[i] * i for i in range(1, len(a))])


def up_antidiff(a):
    return up_trim([Fraction(0)] + [a[i] / (i + 1) for i in range(len(a))])


def up_eval(a, x):
    v = Fraction(0)
    for c in reversed(a):
        v = v * x + c
    return v


def up_from_poly(p, var=0):
    """Dense tuple from a Poly that only involves ``var``."""
    out = {}
    for e, c in p.terms.items():
        out[e[var]] = c
    m = max(out, default=-1)
    return up_trim([out.get(i, Fraction(0)) for i in range(m + 1)])


# ------------------------------------------------------------- PwPoly

class PwPoly:
    """Compactly supported piecewise polynomial on the real line.

    ``breaks`` b0 < ... < bm and one dense polynomial per [b_j, b_{j+1}].
    The function is zero outside [b0, bm].  Point values at a breakpoint
    come from the piece on the right (the last piece at bm).
    """

    __slots__ = ("breaks", "pieces", "_smooth")

    def __init__(self, breaks=(), pieces=()):
        breaks = tuple(Q(b) for b in breaks)
        pieces = [up_trim(Q(c) for c in p) for p in pieces]
        if len(breaks) and len(pieces) != len(breaks) - 1:
            raise ValueError("need one piece per interval")
        if any(b1 >= b2 for b1, b2 in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must increase strictly")
        self.breaks, self.pieces = _pw_normalize(list(breaks), pieces)
        self._smooth = None

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def bspline(cls, degree, start=0):
        """Cardinal B-spline of the given degree on [start, start+degree+1]."""
        # Cox-de Boor on integer knots, exact
        pieces = _cardinal_bspline_pieces(degree)
        shifted = [up_shift(p, -Q(start)) for p in pieces]
        return cls([Q(start) + i for i in range(degree + 2)], shifted)

    def is_zero(self):
        return not self.pieces

    def __bool__(self):
        return bool(self.pieces)

    def __eq__(self, other):
        if not isinstance(other, PwPoly):
            return NotImplemented
        return self.breaks == other.breaks and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.breaks, self.pieces))

    def __repr__(self):
        return "PwPoly(%r, %r)" % (self.breaks, self.pieces)

    def support(self):
        if not self.pieces:
            return None
        return self.breaks[0], self.breaks[-1]

    def refine(self, grid):
        """Pieces on a finer grid (a superset of the breakpoints)."""
        out = []
        for a, b in zip(grid, grid[1:]):
            out.append(self._piece_at(a, b))
        return out

    def _piece_at(self, a, b):
        if not self.pieces or b <= self.breaks[0] or a >= self.breaks[-1]:
            return ()
        j = bisect_right(self.breaks, a) - 1
        return self.pieces[j]

    def __call__(self, x):
        x = Q(x)
        if not self.pieces or x < self.breaks[0] or x > self.breaks[-1]:
            return Fraction(0)
        j = min(bisect_right(self.breaks, x) - 1, len(self.pieces) - 1)
        return up_eval(self.pieces[j], x)

    def _binary(self, other, op):
        grid = sorted(set(self.breaks) | set(other.breaks))
        if len(grid) < 2:
            return PwPoly()
        p1 = self.refine(grid)
        p2 = other.refine(grid)
        return PwPoly(grid, [op(a, b) for a, b in zip(p1, p2)])

    def __add__(self, other):
        return self._binary(other, up_add)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: up_add(a, up_scale(b, -1)))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Q(c)
        return PwPoly(self.breaks, [up_scale(p, c) for p in self.pieces])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self._binary(other, up_mul)

    __rmul__ = __mul__

    def derivative(self):
        """Piecewise derivative (a distributional derivative only when continuous)."""
        return PwPoly(self.breaks, [up_diff(p) for p in self.pieces])

    def integral(self):
        total = Fraction(0)
        for (a, b), p in zip(zip(self.breaks, self.breaks[1:]), self.pieces):
            P = up_antidiff(p)
            total += up_eval(P, b) - up_eval(P, a)
        return total

    def moment(self, m):
        """Integral of x^m times the function."""
        mono = (Fraction(0),) * m + (Fraction(1),)
        return PwPoly(self.breaks, [up_mul(p, mono) for p in self.pieces]).integral()

    def jumps(self):
        """For each breakpoint, the first derivative order that jumps."""
        out = []
        if not self.pieces:
            return out
        pieces = [()] + list(self.pieces) + [()]
        for j, b in enumerate(self.breaks):
            left, right = pieces[j], pieces[j + 1]
            order = 0
            while True:
                if up_eval(left, b) != up_eval(right, b):
                    break
                if not left and not right:
                    order = inf
                    break
                left, right = up_diff(left), up_diff(right)
                order += 1
            out.append(order)
        return out

    @property
    def smoothness(self):
        """Highest r with the function of class C^r (-1: discontinuous)."""
        if self._smooth is None:
            js = self.jumps()
            self._smooth = (min(js) - 1) if js else inf
        return self._smooth


def _pw_normalize(breaks, pieces):
    # strip zero pieces at both ends, merge equal neighbours
    while pieces and not pieces[0]:
        pieces.pop(0)
        breaks.pop(0)
    while pieces and not pieces[-1]:
        pieces.pop()
        breaks.pop()
    if not pieces:
        return (), ()
    nb = [breaks[0]]
    npcs = [pieces[0]]
    for b, p in zip(breaks[1:-1], pieces[1:]):
        if p == npcs[-1]:
            continue
        nb.append(b)
        npcs.append(p)
    nb.append(breaks[-1])
    return tuple(nb), tuple(npcs)


def up_shift(p, s):
    """q(x) = p(x + s)."""
    out = ()
    power = (Fraction(1),)
    lin = up_trim((Q(s), Fraction(1)))
    for c in p:
        out = up_add(out, up_scale(power, c))
        power = up_mul(power, lin)
    return out


def _cardinal_bspline_pieces(degree):
    # pieces of N_degree on [i, i+1], i = 0..degree, via repeated convolution
    # with the unit box: N_{p}(x) = int_{x-1}^{x} N_{p-1}
    pieces = [(Fraction(1),)]
    for p in range(1, degree + 1):
        new = []
        for i in range(p + 1):
            # on [i, i+1]: int_{i}^{x} N_{p-1}|[i,i+1] + int_{x-1}^{i} N_{p-1}|[i-1,i]
            acc = ()
            if i < p:
                P = up_antidiff(pieces[i])
                acc = up_add(P, (-up_eval(P, Fraction(i)),))
            if i >= 1:
                P = up_antidiff(pieces[i - 1])
                shifted = up_shift(P, -1)
                acc = up_add(acc, up_add((up_eval(P, Fraction(i)),),
                                         up_scale(shifted, -1)))
            new.append(acc)
        pieces = new
    return pieces


class PwAntiderivative:
    """a -> integral of f over (-inf, a]: a PwPoly body plus a constant tail."""

    __slots__ = ("body", "tail", "start")

    def __init__(self, body, tail, start):
        self.body = body
        self.tail = tail
        self.start = start

    def __call__(self, a):
        a = Q(a)
        if self.start is None or a < self.start:
            return Fraction(0)
        if a >= self.body.breaks[-1]:
            return self.tail
        return self.body(a)


def pw_antideriv(f):
    """Antiderivative from -inf, returned as a PwAntiderivative."""
    if not f.pieces:
        return PwAntiderivative(PwPoly(), Fraction(0), None)
    acc = Fraction(0)
    pieces = []
    for (a, b), p in zip(zip(f.breaks, f.breaks[1:]), f.pieces):
        P = up_antidiff(p)
        piece = up_add(P, (acc - up_eval(P, a),))
        pieces.append(piece)
        acc = up_eval(piece, b)
    body = PwPoly.__new__(PwPoly)
    body.breaks = f.breaks
    body.pieces = tuple(pieces)
    body._smooth = None
    return PwAntiderivative(body, acc, f.breaks[0])


def pw_star(f1, f2):
    """(f1 * f2)(a) = (int f1)(int_{-inf}^a f2) - (int f2)(int_{-inf}^a f1).

    The constant tails cancel, so the result is compactly supported.
    """
    grid = sorted(set(f1.breaks) | set(f2.breaks))
    if len(grid) < 2:
        return PwPoly()
    i1 = f1.integral()
    i2 = f2.integral()
    A1 = pw_antideriv(f1)
    A2 = pw_antideriv(f2)

    def piece(A, a, b):
        if A.start is None or b <= A.start:
            return ()
        if a >= A.body.breaks[-1]:
            return (A.tail,) if A.tail else ()
        return A.body._piece_at(a, b)

    out = []
    for a, b in zip(grid, grid[1:]):
        p = up_add(up_scale(piece(A2, a, b), i1), up_scale(piece(A1, a, b), -i2))
        out.append(p)
    return PwPoly(grid, out)


# ------------------------------------------------------- DensityCoeff

class DiscontinuityError(ValueError):
    """A derivative was requested across a jump of the coefficient."""


class DensityCoeff:
    """Piecewise polynomial density on R^n with ys1..ysk dependence.

    ``breaks[a]`` is the breakpoint list of axis a; ``cells`` maps a grid
    cell (one interval index per axis) to a Poly in x1..xn, ys1..ysk.
    Cells not listed are zero and nothing lives outside the grid.  For
    n = 0 there is a single cell ``()``.
    """

    __slots__ = ("n", "k", "breaks", "cells", "_hash")

    def __init__(self, n, k, breaks, cells, normalize=True):
        self.n = n
        self.k = k
        self.breaks = tuple(tuple(Q(b) for b in bs) for bs in breaks)
        if len(self.breaks) != n:
            raise ValueError("need breakpoints for %d axes" % n)
        self.cells = {c: p for c, p in cells.items() if p.terms}
        self._hash = None
        if normalize:
            self._normalize()

    @classmethod
    def zero(cls, n, k):
        return cls(n, k, ((),) * n, {})

    @classmethod
    def ystar_poly(cls, n, k, poly):
        """Only meaningful for n = 0: a pure y*-polynomial at the point."""
        if n:
            raise ValueError("a bare y*-polynomial needs n = 0")
        return cls(0, k, (), {(): poly})

    @classmethod
    def from_tensor(cls, pws, ypoly):
        """prod_a pws[a](x_a) * ypoly(ys)."""
        n = len(pws)
        k = ypoly.nvars
        if any(not p.pieces for p in pws) or not ypoly.terms:
            return cls.zero(n, k)
        nv = n + k
        ylift = ypoly.relabel(nv, [n + j for j in range(k)])
        axis_polys = []
        for a, pw in enumerate(pws):
            polys = []
            for piece in pw.pieces:
                polys.append(Poly(nv, {tuple(d if i == a else 0 for i in range(nv)): c
                                       for d, c in enumerate(piece) if c}))
            axis_polys.append(polys)
        cells = {}
        for idx in iproduct(*[range(len(p)) for p in axis_polys]):
            poly = ylift
            for a, j in enumerate(idx):
                poly = poly * axis_polys[a][j]
            cells[idx] = poly
        return cls(n, k, [pw.breaks for pw in pws], cells)

    @classmethod
    def from_pw(cls, pw):
        return cls.from_tensor([pw], Poly.const(0, 1))

    def to_pw(self):
        if self.n != 1 or self.k != 0:
            raise ValueError("only a one-axis density without y* is a PwPoly")
        if not self.cells:
            return PwPoly()
        bs = self.breaks[0]
        pieces = [up_from_poly(self.cells.get((j,), Poly(1))) for j in range(len(bs) - 1)]
        return PwPoly(bs, pieces)

    # -- normalization and comparison

    def _normalize(self):
        if self.n == 0:
            return
        if not self.cells:
            self.breaks = ((),) * self.n
            return
        breaks = [list(b) for b in self.breaks]
        cells = self.cells
        for a in range(self.n):
            nslab = len(breaks[a]) - 1
            slabs = [dict() for _ in range(nslab)]
            for c, p in cells.items():
                slabs[c[a]][c[:a] + c[a + 1:]] = p
            lo = 0
            while lo < nslab and not slabs[lo]:
                lo += 1
            hi = nslab
            while hi > lo and not slabs[hi - 1]:
                hi -= 1
            keep_breaks = [breaks[a][lo]]
            keep_slabs = []
            for s in range(lo, hi):
                if keep_slabs and slabs[s] == keep_slabs[-1]:
                    keep_breaks[-1] = breaks[a][s + 1]
                    continue
                keep_slabs.append(slabs[s])
                keep_breaks.append(breaks[a][s + 1])
            breaks[a] = keep_breaks
            cells = {}
            for s, slab in enumerate(keep_slabs):
                for rest, p in slab.items():
                    cells[rest[:a] + (s,) + rest[a:]] = p
        self.breaks = tuple(tuple(b) for b in breaks)
        self.cells = cells

    def is_zero(self):
        return not self.cells

    def __bool__(self):
        return bool(self.cells)

    def __eq__(self, other):
        if not isinstance(other, DensityCoeff):
            return NotImplemented
        return ((self.n, self.k) == (other.n, other.k)
                and self.breaks == other.breaks and self.cells == other.cells)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.k, self.breaks,
                               frozenset(self.cells.items())))
        return self._hash

    def __repr__(self):
        return "DensityCoeff(n=%d, k=%d, breaks=%r, cells=%d)" % (
            self.n, self.k, self.breaks, len(self.cells))

    # -- arithmetic

    def refine(self, grids):
        """Re-express on finer per-axis grids (supersets of the breakpoints)."""
        if self.n == 0:
            return dict(self.cells)
        maps = []
        for a in range(self.n):
            old = self.breaks[a]
            new = grids[a]
            m = {}
            for j, (lo, hi) in enumerate(zip(new, new[1:])):
                if old and lo >= old[0] and hi <= old[-1]:
                    m.setdefault(bisect_right(old, lo) - 1, []).append(j)
            maps.append(m)
        out = {}
        for c, p in self.cells.items():
            for nc in iproduct(*[maps[a].get(c[a], ()) for a in range(self.n)]):
                out[nc] = p
        return out

    def _union_grids(self, other):
        return [sorted(set(a) | set(b)) for a, b in zip(self.breaks, other.breaks)]

    def _check(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("density coefficients on different charts")

    def __add__(self, other):
        self._check(other)
        if not other.cells:
            return self
        if not self.cells:
            return other
        grids = self._union_grids(other)
        c1 = self.refine(grids)
        c2 = other.refine(grids)
        out = dict(c1)
        for c, p in c2.items():
            out[c] = out[c] + p if c in out else p
        return DensityCoeff(self.n, self.k, grids, out)

    def __neg__(self):
        return DensityCoeff(self.n, self.k, self.breaks,
                            {c: -p for c, p in self.cells.items()}, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        if not c:
            return DensityCoeff.zero(self.n, self.k)
        return DensityCoeff(self.n, self.k, self.breaks,
                            {cell: p.scale(c) for cell, p in self.cells.items()},
                            normalize=False)

    def mul_ystar(self, j):
        """Multiply by ys_j (1-based)."""
        var = Poly.var(self.n + self.k, self.n + j - 1)
        return DensityCoeff(self.n, self.k, self.breaks,
                            {c: p * var for c, p in self.cells.items()},
                            normalize=False)

    def mul_poly(self, poly):
        """Multiply every cell by a Poly in the full variable set."""
        return DensityCoeff(self.n, self.k, self.breaks,
                            {c: p * poly for c, p in self.cells.items()})

    def continuous_along(self, i):
        """True when the coefficient has no jump across x_i hyperplanes."""
        a = i - 1
        bs = self.breaks[a]
        for j, b in enumerate(bs):
            sides = {}
            for c, p in self.cells.items():
                if c[a] == j - 1:
                    sides.setdefault(c[:a] + c[a + 1:], [None, None])[0] = p
                elif c[a] == j:
                    sides.setdefault(c[:a] + c[a + 1:], [None, None])[1] = p
            for left, right in sides.values():
                lv = left.substitute(a, b) if left is not None else Poly(self.n + self.k)
                rv = right.substitute(a, b) if right is not None else Poly(self.n + self.k)
                if lv != rv:
                    return False
        return True

    def diff_x(self, i):
        """Derivative along x_i (1-based); requires continuity across x_i."""
        if not self.continuous_along(i):
            raise DiscontinuityError(
                "coefficient jumps across an x%d breakpoint" % i)
        return DensityCoeff(self.n, self.k, self.breaks,
                            {c: p.diff(i - 1) for c, p in self.cells.items()})

    def cell_bounds(self, c):
        return {a: (self.breaks[a][c[a]], self.breaks[a][c[a] + 1])
                for a in range(self.n)}

    def integrate_x(self):
        """Integral over R^n: a Poly in ys1..ysk."""
        total = Poly(self.n + self.k)
        for c, p in self.cells.items():
            total = total + p.integrate_box(self.cell_bounds(c))
        n = self.n
        return Poly._raw(self.k, {e[n:]: v for e, v in total.terms.items()})

    def ystar_degree(self):
        return max((p.degree(self.n) for p in self.cells.values()), default=-1)

    def support(self):
        if not self.cells:
            return None
        return tuple((bs[0], bs[-1]) for bs in self.breaks)

    def at_point(self, point):
        """Value at a point of R^n (right-continuous), as a Poly in the ys."""
        n = self.n
        idx = []
        for a in range(n):
            bs = self.breaks[a]
            x = Q(point[a])
            if not bs or x < bs[0] or x >= bs[-1]:
                return Poly(self.k)
            idx.append(bisect_right(bs, x) - 1)
        p = self.cells.get(tuple(idx))
        if p is None:
            return Poly(self.k)
        out = {}
        for e, c in p.terms.items():
            v = c
            for a in range(n):
                if e[a]:
                    v *= Q(point[a]) ** e[a]
            L = e[n:]
            out[L] = out.get(L, 0) + v
        return Poly._raw(self.k, {L: v for L, v in out.items() if v})

    def tensor(self, other):
        """Product density on R^(n1+n2) with ys of the second factor shifted."""
        n1, k1, n2, k2 = self.n, self.k, other.n, other.k
        n, k = n1 + n2, k1 + k2
        out = {}
        for c1, p1 in self.cells.items():
            for c2, p2 in other.cells.items():
                terms = {}
                for e1, v1 in p1.terms.items():
                    for e2, v2 in p2.terms.items():
                        e = e1[:n1] + e2[:n2] + e1[n1:] + e2[n2:]
                        terms[e] = v1 * v2
                out[c1 + c2] = Poly._raw(n + k, terms)
        return DensityCoeff(n, k, self.breaks + other.breaks, out)

    def split(self, n1, k1):
        """Write as a finite sum of tensor products: list of (left, right)."""
        n, k = self.n, self.k
        n2, k2 = n - n1, k - k1
        groups = {}
        for c, p in self.cells.items():
            c1, c2 = c[:n1], c[n1:]
            for e, v in p.terms.items():
                e1 = e[:n1] + e[n:n + k1]
                e2 = e[n1:n] + e[n + k1:]
                left = groups.setdefault((c2, e2), {})
                cell = left.setdefault(c1, {})
                cell[e1] = cell.get(e1, 0) + v
        b1, b2 = self.breaks[:n1], self.breaks[n1:]
        out = []
        for (c2, e2), lcells in sorted(groups.items()):
            left = DensityCoeff(n1, k1, b1,
                                {c: Poly(n1 + k1, t) for c, t in lcells.items()})
            right = DensityCoeff(n2, k2, b2,
                                 {c2: Poly._raw(n2 + k2, {e2: Fraction(1)})})
            if left.cells:
                out.append((left, right))
        return out

    def pair_with(self, f):
        """Sum over L of L! * integral of f_L * tau_L (the y-matched pairing)."""
        if (f.n, f.k) != (self.n, self.k):
            raise ValueError("pairing across different charts")
        n = self.n
        by_L = {}
        for e, c in f.poly.terms.items():
            by_L.setdefault(e[n:], []).append((e[:n], c))
        moments = {}

        def moment(a, j, q):
            # integral of x^(q-1) over cell j of axis a
            key = (a, j, q)
            m = moments.get(key)
            if m is None:
                lo, hi = self.breaks[a][j], self.breaks[a][j + 1]
                m = moments[key] = (hi ** q - lo ** q) / q
            return m

        total = Fraction(0)
        for cell, p in self.cells.items():
            for e, v in p.terms.items():
                L = e[n:]
                fl = by_L.get(L)
                if not fl:
                    continue
                acc = Fraction(0)
                for beta, c in fl:
                    w = c
                    for a in range(n):
                        w *= moment(a, cell[a], e[a] + beta[a] + 1)
                    acc += w
                total += acc * v * multi_factorial(L)
        return total

    def components(self):
        """Map from ys-exponent L to the L-th coefficient (a density with k=0)."""
        n = self.n
        out = {}
        for c, p in self.cells.items():
            for e, v in p.terms.items():
                out.setdefault(e[n:], {}).setdefault(c, {})[e[:n]] = v
        return {L: DensityCoeff(n, 0, self.breaks,
                                {c: Poly._raw(n, t) for c, t in cs.items()})
                for L, cs in out.items()}

    def elementary_terms(self):
        """Decompose into (tuple of per-axis PwPoly, L) products.

        The first axis carries the full piecewise structure; the other axes
        contribute single-cell monomials.  Used for printing.
        """
        n = self.n
        if n == 0:
            return [((), L, v) for L, v in
                    sorted(self.cells.get((), Poly(self.k)).terms.items())]
        groups = {}
        for c, p in self.cells.items():
            for e, v in p.terms.items():
                key = (c[1:], e[1:n], e[n:])
                g = groups.setdefault(key, {})
                g.setdefault(c[0], {})[e[0]] = v
        out = []
        b0 = self.breaks[0]
        for (rest_cell, rest_exp, L), pieces in sorted(groups.items()):
            dense = []
            for j in range(len(b0) - 1):
                t = pieces.get(j, {})
                m = max(t, default=-1)
                dense.append(up_trim([t.get(d, Fraction(0)) for d in range(m + 1)]))
            pws = [PwPoly(b0, dense)]
            for a in range(1, n):
                j = rest_cell[a - 1]
                bs = self.breaks[a]
                mono = (Fraction(0),) * rest_exp[a - 1] + (Fraction(1),)
                pws.append(PwPoly((bs[j], bs[j + 1]), [mono]))
            out.append((tuple(pws), L, Fraction(1)))
        return out


def integrate_density(tau, f):
    """Sum over L of L! times the integral of f_L * tau_L over R^n."""
    return tau.pair_with(f)
