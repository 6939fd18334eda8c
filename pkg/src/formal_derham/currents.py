"""Currents on a formal chart: the duals of the form complex.

A current of dual degree r eats r-forms.  It is written against the dual
basis dxs_I dys_J, where (I, J) has bidegree n + k - r and pairs with the
complementary form monomial through ``epsilon_sign``.

* ``DensityCurrent``: coefficients are compactly supported piecewise
  polynomial densities with ys-polynomial dependence.
* ``DeltaCurrent``: finite sums of derivatives of point masses.
* ``Functional``: any linear functional given by a callable; used for
  weak (pairing battery) comparisons and for generalized functions.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product as iproduct

from .coeffs import (DensityCoeff, FormalFunction, Poly, PwPoly, Q,
                     multi_factorial, up_shift)
from .forms import Chart, FormalForm, d as d_form
from .indexcalc import (BiIndex, complement, enumerate_bi, epsilon_sign,
                        merge_sign)


class RepresentationOverflow(ValueError):
    """The exact result has no finite representation of the requested kind."""


def _full(n, k):
    return BiIndex(tuple(range(1, n + 1)), tuple(range(1, k + 1)))


# ----------------------------------------------------------- sign table

@lru_cache(maxsize=None)
def dual_d_table(n, k, bi):
    """How d acts on the dual basis element indexed by ``bi``.

    Returns tuples (kind, idx, new_bi, sign): d sends tau * dual(bi) to
    sum of sign * op(tau) * dual(new_bi), where op is the derivative along
    x_idx for kind "x" and multiplication by ys_idx for kind "y".  The
    signs are solved from <d eta, w> = (-1)^(r+1) <eta, d w>.
    """
    r = n + k - len(bi.x) - len(bi.y) - 1      # eta has dual degree r + 1
    comp = complement(bi, n, k)
    e0 = epsilon_sign(comp, bi, n, k)
    out = []
    for i in comp.x:
        rest = BiIndex(tuple(a for a in comp.x if a != i), comp.y)
        sig, _ = merge_sign(BiIndex((i,), ()), rest)
        new = BiIndex(tuple(sorted(bi.x + (i,))), bi.y)
        # <d_i f, tau> = -<f, d_i tau> supplies one extra minus
        sign = (-1) ** r * sig * e0 * epsilon_sign(rest, new, n, k)
        out.append(("x", i, new, sign))
    for j in comp.y:
        rest = BiIndex(comp.x, tuple(b for b in comp.y if b != j))
        sig, _ = merge_sign(BiIndex((), (j,)), rest)
        new = BiIndex(bi.x, tuple(sorted(bi.y + (j,))))
        sign = (-1) ** (r + 1) * sig * e0 * epsilon_sign(rest, new, n, k)
        out.append(("y", j, new, sign))
    return tuple(out)


def printed_rule_sign(kind, idx, bi):
    """The sign of the literal closed-form rule for d on a dual monomial.

    x-terms: insert dxs_idx in front of dxs_I dys_J.  y-terms: (-1)^(s-1)
    times the sign of moving dys_idx into place among the dys_J, s = |I|.
    """
    if kind == "x":
        return merge_sign(BiIndex((idx,), ()), bi)[0]
    s = len(bi.x)
    before = sum(1 for j in bi.y if j < idx)
    return (-1) ** (s - 1) * (-1) ** before


def compare_printed_rule(max_n=3, max_k=3):
    """Count agreements between the solved sign table and the printed rule."""
    agree = disagree = 0
    bad = []
    for n in range(max_n + 1):
        for k in range(max_k + 1):
            for deg in range(n + k):
                for bi in enumerate_bi(n, k, deg):
                    for kind, idx, new, sign in dual_d_table(n, k, bi):
                        if printed_rule_sign(kind, idx, bi) == sign:
                            agree += 1
                        else:
                            disagree += 1
                            bad.append((n, k, bi, kind, idx))
    return agree, disagree, bad


# ------------------------------------------------------ DensityCurrent

class DensityCurrent:
    """Compactly supported formal density of dual degree r."""

    __slots__ = ("chart", "r", "terms")

    def __init__(self, chart, r, terms=None):
        self.chart = chart
        self.r = r
        n, k = chart.n, chart.k
        clean = {}
        for bi, tau in (terms or {}).items():
            if bi.degree != n + k - r:
                raise ValueError("dual index %s does not have bidegree %d"
                                 % (bi, n + k - r))
            if (tau.n, tau.k) != (n, k):
                raise ValueError("density coefficient on the wrong chart")
            if tau.cells:
                clean[bi] = tau
        self.terms = clean

    @classmethod
    def zero(cls, chart, r):
        return cls(chart, r)

    @classmethod
    def volume(cls, chart, tau):
        """tau times the full dual volume: a current of dual degree 0."""
        return cls(chart, 0, {_full(chart.n, chart.k): tau})

    @classmethod
    def single(cls, chart, bi, tau):
        return cls(chart, chart.n + chart.k - bi.degree, {bi: tau})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DensityCurrent):
            return NotImplemented
        if not self.chart.same_space(other.chart):
            return False
        if self.r != other.r and (self.terms or other.terms):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.chart.n, self.chart.k, frozenset(self.terms.items())))

    def __repr__(self):
        from .textio import format_current
        return "DensityCurrent<%d>(%s)" % (self.r, format_current(self))

    def _check(self, other):
        if not self.chart.same_space(other.chart):
            raise ValueError("currents on different charts")

    def __add__(self, other):
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.r != other.r:
            raise ValueError("cannot add currents of dual degree %d and %d"
                             % (self.r, other.r))
        out = dict(self.terms)
        for bi, tau in other.terms.items():
            out[bi] = out[bi] + tau if bi in out else tau
        return DensityCurrent(self.chart, self.r, out)

    def __neg__(self):
        return DensityCurrent(self.chart, self.r,
                              {b: -t for b, t in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DensityCurrent(self.chart, self.r,
                              {b: t.scale(c) for b, t in self.terms.items()})

    def order(self):
        """Largest ys-degree present (-1 for zero)."""
        return max((t.ystar_degree() for t in self.terms.values()), default=-1)

    def support(self):
        """Bounding box of all coefficients, or None."""
        boxes = [t.support() for t in self.terms.values() if t.cells]
        if not boxes:
            return None
        n = self.chart.n
        return tuple((min(b[a][0] for b in boxes), max(b[a][1] for b in boxes))
                     for a in range(n))


# -------------------------------------------------------- DeltaCurrent

class DeltaCurrent:
    """Finite sum of coeff * L! * (d^alpha f_L)(a) * eps functionals.

    Terms are keyed by (point, alpha, L, dual bi-index).
    """

    __slots__ = ("chart", "r", "terms")

    def __init__(self, chart, r, terms=None):
        self.chart = chart
        self.r = r
        n, k = chart.n, chart.k
        clean = {}
        for key, c in (terms or {}).items():
            a, alpha, L, bi = key
            a = tuple(Q(v) for v in a)
            alpha = tuple(alpha)
            L = tuple(L)
            if len(a) != n or len(alpha) != n or len(L) != k:
                raise ValueError("delta term shape does not match chart")
            if bi.degree != n + k - r:
                raise ValueError("dual index %s does not have bidegree %d"
                                 % (bi, n + k - r))
            c = Q(c)
            key = (a, alpha, L, bi)
            v = clean.get(key, 0) + c
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def point(cls, chart, bi, a=None, alpha=None, L=None, coeff=1):
        n, k = chart.n, chart.k
        a = tuple(a) if a is not None else (0,) * n
        alpha = tuple(alpha) if alpha is not None else (0,) * n
        L = tuple(L) if L is not None else (0,) * k
        return cls(chart, n + k - bi.degree, {(a, alpha, L, bi): coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, DeltaCurrent):
            return NotImplemented
        if not self.chart.same_space(other.chart):
            return False
        if self.r != other.r and (self.terms or other.terms):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.chart.n, self.chart.k, frozenset(self.terms.items())))

    def __repr__(self):
        from .textio import format_current
        return "DeltaCurrent<%d>(%s)" % (self.r, format_current(self))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def _check(self, other):
        if not self.chart.same_space(other.chart):
            raise ValueError("currents on different charts")

    def __add__(self, other):
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.r != other.r:
            raise ValueError("cannot add currents of dual degree %d and %d"
                             % (self.r, other.r))
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return DeltaCurrent(self.chart, self.r, out)

    def __neg__(self):
        return DeltaCurrent(self.chart, self.r, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        return DeltaCurrent(self.chart, self.r,
                            {key: v * c for key, v in self.terms.items()})

    def order(self):
        """(max |alpha|, max |L|) over the terms."""
        return (max((sum(k[1]) for k in self.terms), default=-1),
                max((sum(k[2]) for k in self.terms), default=-1))

    def support(self):
        """Sorted list of base points."""
        return sorted({k[0] for k in self.terms})

    def at_origin(self):
        return all(all(v == 0 for v in key[0]) for key in self.terms)


# ------------------------------------------------------------- pairing

def _check_pair(omega, eta):
    if not omega.chart.same_space(eta.chart):
        raise ValueError("form and current on different charts")
    if omega.r != eta.r:
        raise ValueError("form of degree %d cannot pair with a current of "
                         "dual degree %d" % (omega.r, eta.r))


def _derivative_at(f, alpha, L, a):
    p = f.coefficient(L)
    for i, m in enumerate(alpha):
        for _ in range(m):
            p = p.diff(i)
    return p.evaluate(a)


def pair(omega, eta):
    """<omega, eta>: exact rational pairing of a form with a current."""
    if isinstance(eta, Functional):
        return eta(omega)
    _check_pair(omega, eta)
    n, k = omega.chart.n, omega.chart.k
    total = Fraction(0)
    if isinstance(eta, DensityCurrent):
        for bi, f in omega.terms.items():
            comp = complement(bi, n, k)
            tau = eta.terms.get(comp)
            if tau is None:
                continue
            total += epsilon_sign(bi, comp, n, k) * tau.pair_with(f)
        return total
    if isinstance(eta, DeltaCurrent):
        for (a, alpha, L, bi), c in eta.terms.items():
            comp = complement(bi, n, k)
            f = omega.terms.get(comp)
            if f is None:
                continue
            total += (c * multi_factorial(L) * epsilon_sign(comp, bi, n, k)
                      * _derivative_at(f, alpha, L, a))
        return total
    raise TypeError("cannot pair with %r" % type(eta).__name__)


# ---------------------------------------------------------------- d

def d_density(eta):
    """d: densities of dual degree r+1 -> dual degree r."""
    if eta.r == 0:
        raise ValueError("d is not defined out of dual degree 0")
    chart = eta.chart
    n, k = chart.n, chart.k
    out = {}
    for bi, tau in eta.terms.items():
        for kind, idx, new, sign in dual_d_table(n, k, bi):
            t = tau.diff_x(idx) if kind == "x" else tau.mul_ystar(idx)
            if sign < 0:
                t = -t
            out[new] = out[new] + t if new in out else t
    return DensityCurrent(chart, eta.r - 1, out)


def d_distribution(eta):
    """d on derivative-of-delta currents, by closed-form term rewriting."""
    if eta.r == 0:
        raise ValueError("d is not defined out of dual degree 0")
    chart = eta.chart
    n, k = chart.n, chart.k
    out = {}
    for (a, alpha, L, bi), c in eta.terms.items():
        for kind, idx, new, sign in dual_d_table(n, k, bi):
            if kind == "x":
                # the derivative of a point mass moves the derivative onto f
                na = alpha[:idx - 1] + (alpha[idx - 1] + 1,) + alpha[idx:]
                key = (a, na, L, new)
                v = -sign * c
            else:
                nl = L[:idx - 1] + (L[idx - 1] + 1,) + L[idx:]
                key = (a, alpha, nl, new)
                v = sign * c
            out[key] = out.get(key, 0) + v
    return DeltaCurrent(chart, eta.r - 1, out)


def d_current(eta):
    if isinstance(eta, DensityCurrent):
        return d_density(eta)
    if isinstance(eta, DeltaCurrent):
        return d_distribution(eta)
    if isinstance(eta, Functional):
        return eta.d()
    raise TypeError("no d for %r" % type(eta).__name__)


def zeta(eta):
    """Integral of the ys-free part of a dual-degree-0 current."""
    if eta.r != 0:
        raise ValueError("zeta needs dual degree 0, got %d" % eta.r)
    one = FormalForm.function(eta.chart.one(), eta.chart)
    return pair(one, eta)


# ----------------------------------------------------------- functionals

class Functional:
    """A linear functional known through its values.

    ``eats`` is "forms" (a distribution on r-forms) or "densities" (a
    generalized function on densities of dual degree r).  Its own degree
    in the transposed complex is -r for distributions and r for
    generalized functions.
    """

    __slots__ = ("chart", "eats", "r", "fn")

    def __init__(self, chart, eats, r, fn):
        if eats not in ("forms", "densities"):
            raise ValueError("eats must be 'forms' or 'densities'")
        self.chart = chart
        self.eats = eats
        self.r = r
        self.fn = fn

    @property
    def degree(self):
        return -self.r if self.eats == "forms" else self.r

    def __call__(self, v):
        if v.r != self.r:
            raise ValueError("functional eats degree %d, got %d" % (self.r, v.r))
        return Q(self.fn(v))

    def __add__(self, other):
        if (self.eats, self.r) != (other.eats, other.r):
            raise ValueError("functionals of different type")
        f, g = self.fn, other.fn
        return Functional(self.chart, self.eats, self.r, lambda v: f(v) + g(v))

    def __neg__(self):
        f = self.fn
        return Functional(self.chart, self.eats, self.r, lambda v: -f(v))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Q(c)
        f = self.fn
        return Functional(self.chart, self.eats, self.r, lambda v: c * f(v))

    def d(self):
        """Transposed d: <dF, v> = (-1)^j <F, dv>, j = degree of F."""
        j = self.degree
        sign = -1 if j % 2 else 1
        f = self.fn
        if self.eats == "forms":
            if self.r == 0:
                raise ValueError("d is not defined out of dual degree 0")
            return Functional(self.chart, "forms", self.r - 1,
                              lambda w: sign * f(d_form(w)))
        return Functional(self.chart, "densities", self.r + 1,
                          lambda eta: sign * f(d_density(eta)))

    def agrees_with(self, other, battery):
        return all(self(v) == other(v) for v in battery)

    def vanishes_on(self, battery):
        return all(self(v) == 0 for v in battery)


def embed(eta):
    """The pairing functional of a density or delta current."""
    return Functional(eta.chart, "forms", eta.r, lambda w: pair(w, eta))


def regular_generalized(omega):
    """A form as a generalized function: eta -> (-1)^r <omega, eta>.

    The sign makes the inclusion commute with d.
    """
    sign = -1 if omega.r % 2 else 1
    return Functional(omega.chart, "densities", omega.r,
                      lambda eta: sign * pair(omega, eta))


def point_generalized(chart, r, terms):
    """Singular generalized function on dual-degree-r densities.

    ``terms`` lists (point, alpha, L, dual bi-index, coeff); each sends a
    density to coeff * L! * (d^alpha tau_{bi, L})(point).  Base points
    must avoid the density's breakpoints along differentiated axes.
    """
    terms = [(tuple(Q(v) for v in a), tuple(al), tuple(L), bi, Q(c))
             for a, al, L, bi, c in terms]

    def fn(eta):
        total = Fraction(0)
        for a, alpha, L, bi, c in terms:
            tau = eta.terms.get(bi)
            if tau is None:
                continue
            for i, m in enumerate(alpha):
                for _ in range(m):
                    tau = DensityCoeff(tau.n, tau.k, tau.breaks,
                                       {cell: p.diff(i) for cell, p in tau.cells.items()})
            val = tau.at_point(a)
            total += c * multi_factorial(L) * val.terms.get(L, 0)
        return total

    return Functional(chart, "densities", r, fn)


def materialize_delta(F, x_order, y_order, check=True):
    """Rebuild an origin-supported distribution as a DeltaCurrent.

    Reads F off the monomial basis with x-degree <= x_order and y-degree
    <= y_order; with ``check`` the result must also agree with F one
    degree further out, otherwise the functional is not of that shape.
    """
    chart = F.chart
    n, k = chart.n, chart.k
    r = F.r
    terms = {}
    zero_pt = (Fraction(0),) * n
    for bi in enumerate_bi(n, k, r):
        dual = complement(bi, n, k)
        eps = epsilon_sign(bi, dual, n, k)
        for beta in _exponents(n, x_order):
            for M in _exponents(k, y_order):
                w = _monomial_form(chart, bi, beta, M)
                v = F(w)
                if v:
                    terms[(zero_pt, beta, M, dual)] = (
                        v / (multi_factorial(beta) * multi_factorial(M) * eps))
    out = DeltaCurrent(chart, r, terms)
    if check:
        for w in monomial_battery(chart, r, x_order + 1, y_order + 1):
            if pair(w, out) != F(w):
                raise RepresentationOverflow(
                    "functional is not a point distribution at 0 of order "
                    "(%d, %d)" % (x_order, y_order))
    return out


def _exponents(m, bound):
    """All exponent tuples of length m with total degree <= bound."""
    out = []
    for total in range(bound + 1):
        for combo in combinations_with_replacement(range(m), total):
            e = [0] * m
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    if m == 0:
        return [()]
    return out


def _monomial_form(chart, bi, beta, M, coeff=1):
    f = FormalFunction(chart.n, chart.k, max(chart.cap, sum(M)),
                       {tuple(beta) + tuple(M): coeff})
    return FormalForm(chart, bi.degree, {bi: f})


def monomial_battery(chart, r, x_order, y_order):
    """Monomial r-forms x^beta y^M dx_I dy_J with bounded degrees."""
    out = []
    for bi in enumerate_bi(chart.n, chart.k, r):
        for beta in _exponents(chart.n, x_order):
            for M in _exponents(chart.k, min(y_order, chart.cap)):
                out.append(_monomial_form(chart, bi, beta, M))
    return out


def density_battery(chart, r, y_order, shifts=(0, Fraction(1, 2)), x_powers=(0, 1)):
    """Spline densities of dual degree r spanning a useful test space.

    Products of shifted cubic B-splines (times x^p) on every axis, times
    ys-monomials, on every dual index.
    """
    n, k = chart.n, chart.k
    bump = PwPoly.bspline(3)
    axis_funcs = []
    for s in shifts:
        b = PwPoly(tuple(x + Q(s) for x in bump.breaks),
                   [_shift_dense(p, Q(s)) for p in bump.pieces])
        for p in x_powers:
            mono = PwPoly((b.breaks[0], b.breaks[-1]),
                          [(Fraction(0),) * p + (Fraction(1),)])
            axis_funcs.append(b * mono)
    out = []
    for bi in enumerate_bi(n, k, n + k - r):
        for funcs in iproduct(axis_funcs, repeat=n):
            for M in _exponents(k, y_order):
                tau = DensityCoeff.from_tensor(list(funcs), Poly.monomial(M))
                out.append(DensityCurrent(chart, r, {bi: tau}))
    return out


def _shift_dense(piece, s):
    # q(x) = p(x - s)
    return up_shift(piece, -s)
