"""Differential forms on a formal chart.

A chart (n, k, cap) has ordinary coordinates x1..xn and formal
coordinates y1..yk; coefficients are ``FormalFunction`` values truncated
at total y-degree ``cap``.  A ``FormalForm`` of degree r is a finite map
from canonical bi-indices to coefficients.
"""

from fractions import Fraction
from itertools import permutations
from typing import NamedTuple

from .coeffs import FormalFunction, Poly, Q
from .indexcalc import BiIndex, EMPTY, check_multi, merge_sign


class Chart(NamedTuple):
    n: int
    k: int
    cap: int = 4

    def ff(self, terms=None):
        """A FormalFunction on this chart from an exponent dict."""
        return FormalFunction(self.n, self.k, self.cap, terms)

    def one(self):
        return FormalFunction.const(self.n, self.k, self.cap, 1)

    def x(self, i, power=1):
        return FormalFunction.x(self.n, self.k, self.cap, i, power)

    def y(self, j, power=1):
        return FormalFunction.y(self.n, self.k, self.cap, j, power)

    def same_space(self, other):
        return self.n == other.n and self.k == other.k


def _permutation_sign(seq):
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


class FormalForm:
    """A degree-r differential form: BiIndex -> FormalFunction."""

    __slots__ = ("chart", "r", "terms")

    def __init__(self, chart, r, terms=None):
        self.chart = chart
        self.r = r
        clean = {}
        for bi, f in (terms or {}).items():
            if bi.degree != r:
                raise ValueError("term %s does not have degree %d" % (bi, r))
            check_multi(bi.x, chart.n)
            check_multi(bi.y, chart.k)
            if (f.n, f.k) != (chart.n, chart.k):
                raise ValueError("coefficient chart mismatch")
            if f:
                clean[bi] = f
        self.terms = clean

    @classmethod
    def zero(cls, chart, r):
        return cls(chart, r)

    @classmethod
    def function(cls, f, chart=None):
        chart = chart or Chart(f.n, f.k, f.cap)
        return cls(chart, 0, {EMPTY: f})

    @classmethod
    def basis(cls, chart, bi, coeff=None):
        coeff = chart.one() if coeff is None else coeff
        return cls(chart, bi.degree, {bi: coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def truncated(self):
        return any(f.truncated for f in self.terms.values())

    def coefficient(self, bi):
        return self.terms.get(bi, FormalFunction(self.chart.n, self.chart.k,
                                                 self.chart.cap))

    def __eq__(self, other):
        if not isinstance(other, FormalForm):
            return NotImplemented
        if not self.chart.same_space(other.chart):
            return False
        if self.r != other.r and (self.terms or other.terms):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.chart.n, self.chart.k, frozenset(self.terms.items())))

    def __repr__(self):
        from .textio import format_form
        return "FormalForm<%d>(%s)" % (self.r, format_form(self))

    def _check(self, other):
        if not self.chart.same_space(other.chart):
            raise ValueError("forms live on different charts")

    def __add__(self, other):
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.r != other.r:
            raise ValueError("cannot add forms of degree %d and %d"
                             % (self.r, other.r))
        out = dict(self.terms)
        for bi, f in other.terms.items():
            out[bi] = out[bi] + f if bi in out else f
        return FormalForm(self.chart, self.r, out)

    def __neg__(self):
        return FormalForm(self.chart, self.r, {b: -f for b, f in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return FormalForm(self.chart, self.r,
                          {b: f.scale(c) for b, f in self.terms.items()})

    def times(self, f):
        """Multiply by a function (a 0-form coefficient)."""
        return FormalForm(self.chart, self.r,
                          {b: g * f for b, g in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, FormalFunction):
            return self.times(c)
        return self.scale(c)

    __rmul__ = __mul__

    def monomials(self):
        """Iterate (bi, exponent tuple, coefficient) over every basis monomial."""
        for bi, f in self.terms.items():
            for e, c in f.poly.terms.items():
                yield bi, e, c


def _accumulate(out, bi, f):
    if bi in out:
        out[bi] = out[bi] + f
    else:
        out[bi] = f


def d(omega):
    """Exterior derivative via the first-order expansion in the dx, dy basis."""
    chart = omega.chart
    n, k = chart.n, chart.k
    out = {}
    for bi, f in omega.terms.items():
        used_x = set(bi.x)
        for i in range(1, n + 1):
            if i in used_x:
                continue
            df = f.partial(("x", i))
            if not df:
                continue
            sign, new = merge_sign(BiIndex((i,), ()), bi)
            _accumulate(out, new, df if sign > 0 else -df)
        used_y = set(bi.y)
        for j in range(1, k + 1):
            if j in used_y:
                continue
            df = f.partial(("y", j))
            if not df:
                continue
            sign, new = merge_sign(BiIndex((), (j,)), bi)
            _accumulate(out, new, df if sign > 0 else -df)
    return FormalForm(chart, omega.r + 1, out)


def wedge(omega1, omega2):
    """omega1 ^ omega2 by merging basis monomials."""
    omega1._check(omega2)
    chart = omega1.chart
    if chart.cap != omega2.chart.cap:
        chart = Chart(chart.n, chart.k, min(chart.cap, omega2.chart.cap))
    out = {}
    for b1, f1 in omega1.terms.items():
        for b2, f2 in omega2.terms.items():
            sign, b = merge_sign(b1, b2)
            if not sign:
                continue
            g = f1 * f2
            _accumulate(out, b, g if sign > 0 else -g)
    return FormalForm(chart, omega1.r + omega2.r, out)


# ----------------------------------------------------------- derivations

class Derivation:
    """sum_a coeffs[a] * d/dz_a with z = (x1..xn, y1..yk)."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != chart.n + chart.k:
            raise ValueError("a derivation needs %d coefficients" % (chart.n + chart.k))
        self.chart = chart
        self.coeffs = coeffs

    @classmethod
    def basis(cls, chart, slot):
        """The coordinate field for slot 0..n+k-1 (x's first)."""
        zero = FormalFunction(chart.n, chart.k, chart.cap)
        return cls(chart, [chart.one() if a == slot else zero
                           for a in range(chart.n + chart.k)])

    def __call__(self, f):
        out = FormalFunction(f.n, f.k, f.cap)
        n = self.chart.n
        for a, c in enumerate(self.coeffs):
            if not c:
                continue
            which = ("x", a + 1) if a < n else ("y", a - n + 1)
            out = out + c * f.partial(which)
        return out

    def scaled(self, f):
        return Derivation(self.chart, [f * c for c in self.coeffs])

    def __add__(self, other):
        return Derivation(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def bracket(self, other):
        """[X, Y] componentwise: X(Y_a) - Y(X_a)."""
        return Derivation(self.chart, [self(b) - other(a)
                                       for a, b in zip(self.coeffs, other.coeffs)])

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.coeffs == other.coeffs

    __hash__ = None


def _slots(bi, n):
    return [i - 1 for i in bi.x] + [n + j - 1 for j in bi.y]


def _det(rows):
    # Leibniz expansion; rows is an r x r list of FormalFunctions
    r = len(rows)
    if r == 0:
        return None
    total = None
    for perm in permutations(range(r)):
        term = rows[0][perm[0]]
        for a in range(1, r):
            term = term * rows[a][perm[a]]
        if _permutation_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def eval_on_derivations(omega, fields):
    """omega(X_1, ..., X_r) as a formal function.

    A basis covector picks one coefficient of a derivation; a basis
    monomial evaluates to the determinant of those picks.
    """
    fields = tuple(fields)
    if len(fields) != omega.r:
        raise ValueError("form of degree %d needs %d derivations, got %d"
                         % (omega.r, omega.r, len(fields)))
    chart = omega.chart
    out = FormalFunction(chart.n, chart.k, chart.cap)
    for bi, f in omega.terms.items():
        if omega.r == 0:
            out = out + f
            continue
        slots = _slots(bi, chart.n)
        rows = [[X.coeffs[s] for X in fields] for s in slots]
        out = out + f * _det(rows)
    return out


# ------------------------------------------------------------- pullback

class ChartMorphism:
    """A map of charts given by coordinate images.

    ``x_images[i]`` and ``y_images[j]`` are FormalFunctions on the source
    chart: the pullbacks of the target's x_{i+1} and y_{j+1}.  Every
    y-image must have no y-free part, so truncation commutes with
    substitution.
    """

    def __init__(self, source, target, x_images, y_images):
        x_images = tuple(x_images)
        y_images = tuple(y_images)
        if len(x_images) != target.n or len(y_images) != target.k:
            raise ValueError("need %d x-images and %d y-images"
                             % (target.n, target.k))
        for f in x_images + y_images:
            if (f.n, f.k) != (source.n, source.k):
                raise ValueError("coordinate image on the wrong chart")
        sn = source.n
        for j, f in enumerate(y_images):
            if any(sum(e[sn:]) == 0 for e in f.poly.terms):
                raise ValueError(
                    "truncation-unsafe substitution: image of y%d has a "
                    "y-free part" % (j + 1))
        self.source = source
        self.target = target
        self.x_images = x_images
        self.y_images = y_images

    @classmethod
    def identity(cls, chart):
        return cls(chart, chart, [chart.x(i) for i in range(1, chart.n + 1)],
                   [chart.y(j) for j in range(1, chart.k + 1)])

    def pull_function(self, f):
        """phi^*(f): substitute the coordinate images."""
        src = self.source
        images = self.x_images + self.y_images
        cache = {}

        def power(a, p):
            key = (a, p)
            if key not in cache:
                acc = src.one() if p == 0 else power(a, p - 1) * images[a]
                cache[key] = acc
            return cache[key]

        out = FormalFunction(src.n, src.k, src.cap)
        for e, c in f.poly.terms.items():
            term = FormalFunction.const(src.n, src.k, src.cap, c)
            for a, p in enumerate(e):
                if p:
                    term = term * power(a, p)
            out = out + term
        return out

    def coordinate_differential(self, slot):
        n = self.target.n
        img = self.x_images[slot] if slot < n else self.y_images[slot - n]
        return d(FormalForm.function(img, self.source))


def pullback(phi, omega):
    """phi^natural(omega): wedge of pulled-back coordinate differentials."""
    if not phi.target.same_space(omega.chart):
        raise ValueError("form does not live on the morphism's target chart")
    src = phi.source
    diffs = {}
    out = FormalForm.zero(src, omega.r)
    n = phi.target.n
    for bi, f in omega.terms.items():
        acc = FormalForm.function(src.one(), src)
        for s in _slots(bi, n):
            if s not in diffs:
                diffs[s] = phi.coordinate_differential(s)
            acc = wedge(acc, diffs[s])
        acc = acc.times(phi.pull_function(f))
        out = out + acc
    return out
