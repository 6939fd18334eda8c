"""Tensor products of complexes and the product-chart maps.

For charts (n1, k1) and (n2, k2) the product chart is (n1+n2, k1+k2),
with the second factor's x's shifted by n1 and its y's by k1.

* ``psi``: forms, a (x) b -> a ^ b after relabelling.
* ``boxtimes``: densities or point currents, a signed basis-wise product
  satisfying <psi(w1 (x) w2), e1 # e2> = (-1)^(r1 r2) <w1, e1><w2, e2>.
* ``split_form`` / ``split_current``: the inverses, as tensor elements.
"""

from fractions import Fraction

from .coeffs import FormalFunction, Poly
from .currents import (DeltaCurrent, DensityCurrent, d_density,
                       d_distribution)
from .forms import Chart, FormalForm, d as d_form
from .indexcalc import BiIndex, kunneth_reindex, shift_concat, split_bi


def _kind_of(obj):
    if isinstance(obj, FormalForm):
        return "forms"
    if isinstance(obj, DensityCurrent):
        return "density"
    if isinstance(obj, DeltaCurrent):
        return "delta"
    raise TypeError("no tensor kind for %r" % type(obj).__name__)


def complex_degree(obj):
    """Degree in its complex: r for forms, -r for currents of dual degree r."""
    return obj.r if isinstance(obj, FormalForm) else -obj.r


def _d(obj):
    if isinstance(obj, FormalForm):
        return d_form(obj)
    if obj.r == 0:
        return None
    if isinstance(obj, DensityCurrent):
        return d_density(obj)
    return d_distribution(obj)


class TensorElement:
    """Finite sum of (left, right) pairs of one kind over fixed factor charts.

    Pairs may have different bidegrees as long as the total degree agrees
    (d of a pure tensor has two bidegrees).
    """

    __slots__ = ("kind", "chart1", "chart2", "pairs")

    def __init__(self, chart1, chart2, pairs, kind=None):
        pairs = [(a, b) for a, b in pairs if a and b]
        if kind is None:
            if not pairs:
                raise ValueError("kind needed for an empty tensor element")
            kind = _kind_of(pairs[0][0])
        for a, b in pairs:
            if _kind_of(a) != kind or _kind_of(b) != kind:
                raise TypeError("tensor factors of mixed kinds")
            if not a.chart.same_space(chart1) or not b.chart.same_space(chart2):
                raise ValueError("tensor factor on the wrong chart")
        self.kind = kind
        self.chart1 = chart1
        self.chart2 = chart2
        self.pairs = pairs

    @classmethod
    def pure(cls, a, b):
        return cls(a.chart, b.chart, [(a, b)], _kind_of(a))

    def __add__(self, other):
        return TensorElement(self.chart1, self.chart2, self.pairs + other.pairs,
                             self.kind)

    def scale(self, c):
        return TensorElement(self.chart1, self.chart2,
                             [(a.scale(c), b) for a, b in self.pairs], self.kind)

    def __neg__(self):
        return self.scale(-1)

    def bidegrees(self):
        return sorted({(complex_degree(a), complex_degree(b)) for a, b in self.pairs})

    def to_product(self, cap=None):
        if self.kind == "forms":
            return psi(self, cap=cap)
        return boxtimes_sum(self)

    def normal_form(self):
        """Canonical dict for form tensors: monomial pair -> coefficient."""
        if self.kind != "forms":
            raise TypeError("normal form is only defined for form tensors")
        out = {}
        for a, b in self.pairs:
            for bi1, e1, c1 in a.monomials():
                for bi2, e2, c2 in b.monomials():
                    key = (bi1, e1, bi2, e2)
                    out[key] = out.get(key, 0) + c1 * c2
        return {k: v for k, v in out.items() if v}

    def is_zero(self):
        if self.kind == "forms":
            return not self.normal_form()
        return not self.to_product()


def d_tensor(t):
    """d(a (x) b) = da (x) b + (-1)^deg(a) a (x) db."""
    pairs = []
    for a, b in t.pairs:
        da = _d(a)
        if da is not None and da:
            pairs.append((da, b))
        db = _d(b)
        if db is not None and db:
            sign = -1 if complex_degree(a) % 2 else 1
            pairs.append((a.scale(sign), db))
    return TensorElement(t.chart1, t.chart2, pairs, t.kind)


# ----------------------------------------------------------------- psi

def product_chart(chart1, chart2, cap=None):
    if cap is None:
        cap = chart1.cap + chart2.cap
    return Chart(chart1.n + chart2.n, chart1.k + chart2.k, cap)


def _concat_poly(p1, n1, k1, p2, n2, k2):
    """p1(x, y) * p2(x', y') on the product variable list."""
    out = {}
    for e1, c1 in p1.terms.items():
        x1, y1 = e1[:n1], e1[n1:]
        for e2, c2 in p2.terms.items():
            out[x1 + e2[:n2] + y1 + e2[n2:]] = c1 * c2
    return Poly._raw(n1 + n2 + k1 + k2, out)


def psi_pair(omega1, omega2, cap=None):
    """Psi of one pure tensor of forms."""
    c1, c2 = omega1.chart, omega2.chart
    chart = product_chart(c1, c2, cap)
    n1, k1, n2, k2 = c1.n, c1.k, c2.n, c2.k
    out = {}
    for bi1, f1 in omega1.terms.items():
        for bi2, f2 in omega2.terms.items():
            sign, bi = kunneth_reindex(bi1, n1, k1, bi2, n2, k2)
            poly = _concat_poly(f1.poly, n1, k1, f2.poly, n2, k2)
            if sign < 0:
                poly = -poly
            f = FormalFunction(chart.n, chart.k, chart.cap, poly,
                               f1.truncated or f2.truncated)
            out[bi] = out[bi] + f if bi in out else f
    return FormalForm(chart, omega1.r + omega2.r, out)


def psi(t, cap=None):
    """Psi on a tensor element of forms."""
    if t.kind != "forms":
        raise TypeError("psi needs form factors")
    chart = product_chart(t.chart1, t.chart2, cap)
    total = None
    for a, b in t.pairs:
        v = psi_pair(a, b, cap)
        total = v if total is None else total + v
    if total is None:
        return FormalForm.zero(chart, 0)
    return total


def split_form(omega, chart1, chart2):
    """Inverse of psi: write a product-chart form as a tensor element."""
    n1, k1 = chart1.n, chart1.k
    n2, k2 = chart2.n, chart2.k
    if (omega.chart.n, omega.chart.k) != (n1 + n2, k1 + k2):
        raise ValueError("form does not live on the product chart")
    n = n1 + n2
    groups = {}
    for bi, f in omega.terms.items():
        sign, bi1, bi2 = split_bi(bi, n1, k1)
        for e, c in f.poly.terms.items():
            e1 = e[:n1] + e[n:n + k1]
            e2 = e[n1:n] + e[n + k1:]
            left = groups.setdefault((bi2, e2), {}).setdefault(bi1, {})
            left[e1] = left.get(e1, 0) + sign * c
    pairs = []
    for (bi2, e2), lefts in sorted(groups.items()):
        terms1 = {b: FormalFunction(n1, k1, chart1.cap, Poly(n1 + k1, t))
                  for b, t in lefts.items()}
        r1 = next(iter(lefts)).degree
        a = FormalForm(chart1, r1, terms1)
        b = FormalForm(chart2, bi2.degree,
                       {bi2: FormalFunction(n2, k2, chart2.cap, Poly(n2 + k2, {e2: 1}))})
        pairs.append((a, b))
    return TensorElement(chart1, chart2, pairs, "forms")


# ------------------------------------------------------------ boxtimes

def boxtimes_exponent(n1, k1, n2, k2, r1, r2, t1, t2):
    """a = t2 k1 + n2 r1 + n2 t1 + r2 k1 + n1 r2 + r1 t2 + t1 t2."""
    return t2 * k1 + n2 * r1 + n2 * t1 + r2 * k1 + n1 * r2 + r1 * t2 + t1 * t2


def _box_sign(c1, c2, r1, r2, d1, d2):
    t1 = c1.n - len(d1.x)
    t2 = c2.n - len(d2.x)
    a = boxtimes_exponent(c1.n, c1.k, c2.n, c2.k, r1, r2, t1, t2)
    return -1 if a % 2 else 1


def _join_bi(d1, d2, c1):
    return BiIndex(shift_concat(d1.x, d2.x, c1.n), shift_concat(d1.y, d2.y, c1.k))


def boxtimes(eta1, eta2):
    """eta1 # eta2 on the product chart (densities or point currents)."""
    k1, k2 = _kind_of(eta1), _kind_of(eta2)
    if k1 != k2 or k1 == "forms":
        raise TypeError("boxtimes needs two currents of the same kind")
    c1, c2 = eta1.chart, eta2.chart
    chart = product_chart(c1, c2)
    r = eta1.r + eta2.r
    if k1 == "density":
        out = {}
        for d1, tau1 in eta1.terms.items():
            for d2, tau2 in eta2.terms.items():
                sign = _box_sign(c1, c2, eta1.r, eta2.r, d1, d2)
                tau = tau1.tensor(tau2)
                if sign < 0:
                    tau = -tau
                bi = _join_bi(d1, d2, c1)
                out[bi] = out[bi] + tau if bi in out else tau
        return DensityCurrent(chart, r, out)
    out = {}
    for (a1, al1, L1, d1), v1 in eta1.terms.items():
        for (a2, al2, L2, d2), v2 in eta2.terms.items():
            sign = _box_sign(c1, c2, eta1.r, eta2.r, d1, d2)
            key = (a1 + a2, al1 + al2, L1 + L2, _join_bi(d1, d2, c1))
            out[key] = out.get(key, 0) + sign * v1 * v2
    return DeltaCurrent(chart, r, out)


def boxtimes_sum(t):
    if t.kind == "forms":
        raise TypeError("boxtimes needs current factors")
    total = None
    for a, b in t.pairs:
        v = boxtimes(a, b)
        total = v if total is None else total + v
    if total is None:
        chart = product_chart(t.chart1, t.chart2)
        cls = DensityCurrent if t.kind == "density" else DeltaCurrent
        return cls(chart, 0)
    return total


def split_current(eta, chart1, chart2):
    """Inverse of boxtimes: a product-chart current as a tensor element."""
    n1, k1 = chart1.n, chart1.k
    n2, k2 = chart2.n, chart2.k
    if (eta.chart.n, eta.chart.k) != (n1 + n2, k1 + k2):
        raise ValueError("current does not live on the product chart")
    pairs = []
    if isinstance(eta, DensityCurrent):
        for bi, tau in sorted(eta.terms.items()):
            _, d1, d2 = split_bi(bi, n1, k1)
            r1 = n1 + k1 - d1.degree
            r2 = n2 + k2 - d2.degree
            sign = _box_sign(chart1, chart2, r1, r2, d1, d2)
            for t1, t2 in tau.split(n1, k1):
                if sign < 0:
                    t1 = -t1
                pairs.append((DensityCurrent(chart1, r1, {d1: t1}),
                              DensityCurrent(chart2, r2, {d2: t2})))
        return TensorElement(chart1, chart2, pairs, "density")
    groups = {}
    for (a, al, L, bi), v in eta.terms.items():
        _, d1, d2 = split_bi(bi, n1, k1)
        r1 = n1 + k1 - d1.degree
        r2 = n2 + k2 - d2.degree
        sign = _box_sign(chart1, chart2, r1, r2, d1, d2)
        right = (a[n1:], al[n1:], L[k1:], d2)
        left = groups.setdefault((r2, right), {})
        lkey = (a[:n1], al[:n1], L[:k1], d1)
        left[lkey] = left.get(lkey, 0) + sign * v
    for (r2, right), lefts in sorted(groups.items()):
        r1 = n1 + k1 - next(iter(lefts))[3].degree
        pairs.append((DeltaCurrent(chart1, r1, lefts),
                      DeltaCurrent(chart2, r2, {right: Fraction(1)})))
    return TensorElement(chart1, chart2, pairs, "delta")
