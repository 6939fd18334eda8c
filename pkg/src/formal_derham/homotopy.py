"""Augmentations and explicit contractions of the four complexes on a chart.

A ``Contraction`` bundles, for one complex:

* ``include``: scalars -> degree 0 (constants, or the unit bump density),
* ``project``: degree 0 -> scalars (value at 0, or total integral),
* ``h``: the degree -1 homotopy, and the complex's own ``d``,

with d h + h d = id - include(project(.)) on every element.  Operators
return ``None`` for "zero in a degree the complex does not have".

Building blocks: the radial homotopy on R^n (polynomial forms), the
formal integral in one y variable, the one-axis density homotopy built on
``pw_star``, transposes of all of these, and the tensor combinator
H = h_A (x) 1 + (include_A project_A) (x) h_B.
"""

from fractions import Fraction
from functools import lru_cache

from .coeffs import DensityCoeff, FormalFunction, Poly, PwPoly, Q, pw_star
from .currents import (DeltaCurrent, DensityCurrent, Functional,
                       RepresentationOverflow, d_density, d_distribution,
                       density_battery, embed, materialize_delta,
                       monomial_battery, pair)
from .forms import Chart, FormalForm, d as d_form
from .indexcalc import BiIndex, EMPTY
from .kunneth import (boxtimes, complex_degree, product_chart, psi_pair,
                      split_current, split_form)


def _add(items):
    total = None
    for v in items:
        if v is None:
            continue
        total = v if total is None else total + v
    return total


class Contraction:
    """Executable contraction data for one complex on one chart."""

    def __init__(self, kind, chart, include, project, h, d, degree,
                 is_zero=None, note=""):
        self.kind = kind
        self.chart = chart
        self._include = include
        self._project = project
        self._h = h
        self._d = d
        self._degree = degree
        self._is_zero = is_zero or (lambda x: x.is_zero())
        self.note = note

    def include(self, lam=1):
        return self._include(Q(lam))

    def project(self, x):
        if x is None or self._degree(x) != 0:
            return Fraction(0)
        return Q(self._project(x))

    def h(self, x):
        if x is None:
            return None
        return self._h(x)

    def d(self, x):
        if x is None:
            return None
        return self._d(x)

    def degree(self, x):
        return self._degree(x)

    def is_zero(self, x):
        return x is None or self._is_zero(x)

    def defect(self, x):
        """d h x + h d x + include(project x) - x (zero when the identity holds)."""
        parts = [self.d(self.h(x)), self.h(self.d(x)), -x]
        if self._degree(x) == 0:
            parts.append(self.include(self.project(x)))
        return _add(parts)

    def check_identity(self, x):
        return self.is_zero(self.defect(x))

    def check_augmentation(self):
        return self.project(self.include(1)) == 1

    def check_strong(self, x):
        """d h d x == d x."""
        dx = self.d(x)
        if dx is None:
            return True
        return self.is_zero(_add([self.d(self.h(dx)), -dx]))


# ------------------------------------------------------------------ forms

def _form_degree(x):
    return x.r


def _form_d(x):
    if x.r >= x.chart.n + x.chart.k:
        return None
    return d_form(x)


def _const_form(chart, lam):
    return FormalForm.function(FormalFunction.const(chart.n, chart.k, chart.cap, lam), chart)


def _value_at_zero(x):
    f = x.terms.get(EMPTY)
    if f is None:
        return Fraction(0)
    return f.poly.terms.get((0,) * (f.n + f.k), Fraction(0))


def contract_radial_x(n):
    """Radial homotopy on polynomial forms on R^n, base point 0.

    h(x^a dx_I) = sum_q (-1)^(q-1) x_{i_q} x^a / (|a| + r) dx_{I - i_q}.
    """
    chart = Chart(n, 0, 0)

    def h(x):
        r = x.r
        if r == 0:
            return None
        out = {}
        for bi, f in x.terms.items():
            for q, i in enumerate(bi.x):
                rest = BiIndex(bi.x[:q] + bi.x[q + 1:], ())
                sign = 1 if q % 2 == 0 else -1
                terms = {}
                for e, c in f.poly.terms.items():
                    ne = e[:i - 1] + (e[i - 1] + 1,) + e[i:]
                    terms[ne] = sign * c / (sum(e) + r)
                g = FormalFunction(n, 0, f.cap, terms)
                out[rest] = out[rest] + g if rest in out else g
        return FormalForm(x.chart, r - 1, out)

    return Contraction("forms", chart, lambda lam: _const_form(chart, lam),
                       _value_at_zero, h, _form_d, _form_degree,
                       note="radial homotopy on R^%d" % n)


def _formal_y1(cap):
    chart = Chart(0, 1, cap)

    def h(x):
        if x.r == 0:
            return None
        f = x.terms.get(BiIndex((), (1,)))
        if f is None:
            return FormalForm.zero(x.chart, 0)
        g = FormalFunction(0, 1, f.cap, f.poly.antidiff(0), f.truncated)
        return FormalForm.function(g, x.chart)

    return Contraction("forms", chart, lambda lam: _const_form(chart, lam),
                       _value_at_zero, h, _form_d, _form_degree,
                       note="formal integral in y")


def _trivial_forms(cap):
    chart = Chart(0, 0, cap)
    return Contraction("forms", chart, lambda lam: _const_form(chart, lam),
                       _value_at_zero, lambda x: None, lambda x: None,
                       _form_degree, note="point")


@lru_cache(maxsize=None)
def contract_formal_y(k, cap):
    """Contraction of the formal-variable forms on (R^0)^(k), built as a k-fold tensor."""
    if k == 0:
        return _trivial_forms(cap)
    if k == 1:
        return _formal_y1(cap)
    return tensor_contraction(contract_formal_y(k - 1, cap), _formal_y1(cap), cap=cap)


@lru_cache(maxsize=None)
def contract_forms(n, k, cap):
    """Contraction of the form complex of (R^n)^(k): radial (x) formal."""
    if n == 0:
        return contract_formal_y(k, cap)
    if k == 0:
        c = contract_radial_x(n)
        return _recap_forms(c, cap)
    return tensor_contraction(contract_radial_x(n), contract_formal_y(k, cap), cap=cap)


def _recap_forms(c, cap):
    chart = Chart(c.chart.n, c.chart.k, cap)
    return Contraction("forms", chart, lambda lam: _const_form(chart, lam),
                       c._project, c._h, c._d, c._degree, note=c.note)


# -------------------------------------------------------------- densities

def _cur_degree(x):
    return -x.r


def _density_d(x):
    if x.r == 0:
        return None
    return d_density(x)


def _bump_volume(chart, bump, lam):
    n, k = chart.n, chart.k
    tau = DensityCoeff.from_tensor([bump] * n, Poly.const(k, lam))
    return DensityCurrent.volume(chart, tau)


def _zeta_any(x):
    one = FormalForm.function(x.chart.one(), x.chart)
    return pair(one, x)


def contract_density_axis(bump):
    """One axis: h(tau dxs1) = bump * tau via pw_star, so d h = id - alpha zeta."""
    if bump.integral() != 1:
        raise ValueError("bump must have integral exactly 1, got %s" % bump.integral())
    chart = Chart(1, 0, 0)
    top = BiIndex((1,), ())

    def h(x):
        if x.r == 1:
            return None
        tau = x.terms.get(top)
        if tau is None:
            return DensityCurrent.zero(chart, 1)
        out = pw_star(bump, tau.to_pw())
        return DensityCurrent(chart, 1, {EMPTY: DensityCoeff.from_pw(out)})

    return Contraction("densities", chart, lambda lam: _bump_volume(chart, bump, lam),
                       _zeta_any, h, _density_d, _cur_degree,
                       note="one-axis density homotopy")


def _trivial_density():
    chart = Chart(0, 0, 0)
    return Contraction("densities", chart,
                       lambda lam: _bump_volume(chart, None, lam),
                       _zeta_any, lambda x: None, lambda x: None, _cur_degree,
                       note="point")


def _delta_to_density(eta):
    """On an n = 0 chart point currents and densities coincide."""
    chart = eta.chart
    k = chart.k
    by_bi = {}
    for (a, alpha, L, bi), c in eta.terms.items():
        by_bi.setdefault(bi, {})[L] = c
    return DensityCurrent(chart, eta.r,
                          {bi: DensityCoeff(0, k, (), {(): Poly(k, t)})
                           for bi, t in by_bi.items()})


def _density_to_delta(eta):
    chart = eta.chart
    terms = {}
    for bi, tau in eta.terms.items():
        for L, c in tau.cells.get((), Poly(chart.k)).terms.items():
            terms[((), (), L, bi)] = c
    return DeltaCurrent(chart, eta.r, terms)


@lru_cache(maxsize=None)
def contract_density_y(k, cap):
    """Densities on (R^0)^(k): the transpose of the formal-variable forms contraction.

    Elements are ys-polynomials; ``h`` reads the transposed homotopy back
    off the monomial basis.
    """
    chart = Chart(0, k, cap)
    if k == 0:
        return _trivial_density()

    def h(x):
        if x.r == k:
            return None
        s = max(x.order(), 0)
        forms = contract_formal_y(k, max(cap, s + 3))
        F = embed(_density_to_delta(x))
        sign = -1 if x.r % 2 == 0 else 1     # (-1)^(j-1) with j = -r
        G = Functional(chart, "forms", x.r + 1,
                       lambda v, F=F: sign * _val(F, forms.h(_recap(v, forms.chart))))
        return _delta_to_density(materialize_delta(G, 0, s + 1))

    return Contraction("densities", chart, lambda lam: _bump_volume(chart, None, lam),
                       _zeta_any, h, _density_d, _cur_degree,
                       note="transposed formal integral")


def _recap(v, chart):
    """The same form read on a chart with a different cap."""
    return FormalForm(chart, v.r, {bi: FormalFunction(chart.n, chart.k, chart.cap, f.poly)
                                   for bi, f in v.terms.items()})


def _val(F, v):
    if v is None:
        return Fraction(0)
    return F(_recap(v, F.chart))


def default_bump():
    return PwPoly.bspline(2)


@lru_cache(maxsize=None)
def contract_density(n, k, bump=None, cap=4):
    """Contraction of compactly supported densities on (R^n)^(k)."""
    bump = bump or default_bump()
    if bump.integral() != 1:
        raise ValueError("bump must have integral exactly 1, got %s" % bump.integral())
    ypart = contract_density_y(k, cap)
    if n == 0:
        return ypart
    xpart = contract_density_axis(bump)
    for _ in range(n - 1):
        xpart = tensor_contraction(xpart, contract_density_axis(bump))
    if k == 0:
        return xpart
    return tensor_contraction(xpart, ypart)


# ----------------------------------------------------------- combinators

def tensor_contraction(cA, cB, cap=None):
    """Contraction of the product chart from contractions of the factors.

    H = h_A (x) 1 + (include_A project_A) (x) h_B, transported through psi
    (forms) or boxtimes (densities).
    """
    if cA.kind != cB.kind or cA.kind not in ("forms", "densities"):
        raise TypeError("tensor_contraction needs two form or two density contractions")
    chart = product_chart(cA.chart, cB.chart,
                          cap if cap is not None else max(cA.chart.cap, cB.chart.cap))
    ch1, ch2 = cA.chart, cB.chart
    if cA.kind == "forms":
        def product(a, b):
            return psi_pair(a, b, chart.cap)

        def split(x):
            return split_form(x, ch1, ch2).pairs
        degree, d = _form_degree, _form_d
    else:
        def product(a, b):
            return boxtimes(a, b)

        def split(x):
            return split_current(x, ch1, ch2).pairs
        degree, d = _cur_degree, _density_d

    def include(lam):
        return product(cA.include(1), cB.include(lam))

    def project(x):
        total = Fraction(0)
        for a, b in split(x):
            if degree(a) == 0 and degree(b) == 0:
                total += cA.project(a) * cB.project(b)
        return total

    def h(x):
        parts = []
        for a, b in split(x):
            ha = cA.h(a)
            if ha is not None:
                parts.append(product(ha, b))
            if degree(a) == 0:
                pa = cA.project(a)
                if pa:
                    hb = cB.h(b)
                    if hb is not None:
                        parts.append(product(cA.include(pa), hb))
        total = _add(parts)
        if total is None:
            rdeg = degree(x) - 1
            r = rdeg if cA.kind == "forms" else -rdeg
            if r < 0 or r > chart.n + chart.k:
                return None
            zero_cls = FormalForm if cA.kind == "forms" else DensityCurrent
            return zero_cls(chart, r)
        return total

    return Contraction(cA.kind, chart, include, project, h, d, degree,
                       note="(%s) x (%s)" % (cA.note, cB.note))


def transpose_contraction(c, battery=None):
    """Contraction of the dual complex, acting on Functional values.

    (#h)(F)(v) = (-1)^(j-1) F(h v) for F of degree j, and the
    augmentations swap roles.  Equality is tested on ``battery(r)``.
    """
    chart = c.chart
    if c.kind == "forms":
        kind, eats = "distributions", "forms"
    elif c.kind == "densities":
        kind, eats = "generalized", "densities"
    else:
        raise TypeError("can only transpose a form or density contraction")
    top = chart.n + chart.k

    def include(lam):
        return Functional(chart, eats, 0, lambda v: lam * c.project(v))

    def project(F):
        return F(c.include(1))

    def h(F):
        j = F.degree
        sign = -1 if (j - 1) % 2 else 1
        if eats == "forms":
            if F.r + 1 > top:
                return None
            r_new = F.r + 1
        else:
            if F.r - 1 < 0:
                return None
            r_new = F.r - 1

        def fn(v, F=F):
            hv = c.h(v)
            if hv is None:
                return Fraction(0)
            return sign * F(hv)
        return Functional(chart, eats, r_new, fn)

    def d(F):
        if eats == "forms" and F.r == 0:
            return None
        if eats == "densities" and F.r == top:
            return None
        return F.d()

    if battery is None:
        if eats == "forms":
            def battery(r):
                return monomial_battery(chart, r, 2, min(2, chart.cap - 1))
        else:
            def battery(r):
                return density_battery(chart, r, 2)

    def is_zero(F):
        return F.vanishes_on(battery(F.r))

    return Contraction(kind, chart, include, project, h, d,
                       lambda F: F.degree, is_zero=is_zero,
                       note="transpose of " + c.note)


def contract_distributions(n, k, cap=4):
    """Distribution complex contraction with point-current closure.

    Functionals go through the transposed form contraction.  A
    DeltaCurrent supported at 0 is mapped to a DeltaCurrent; any other
    DeltaCurrent raises RepresentationOverflow.
    """
    chart = Chart(n, k, cap)
    base = transpose_contraction(contract_forms(n, k, cap))
    full = BiIndex(tuple(range(1, n + 1)), tuple(range(1, k + 1)))

    def include(lam):
        return DeltaCurrent.point(chart, full, coeff=lam)

    def project(x):
        if isinstance(x, Functional):
            return base.project(x)
        one = FormalForm.function(chart.one(), chart)
        return pair(one, x)

    def h(x):
        if isinstance(x, Functional):
            return base.h(x)
        if x.r == n + k:
            return None
        if not x.at_origin():
            raise RepresentationOverflow(
                "homotopy of a point current away from 0 is not a finite "
                "sum of point currents")
        xo, yo = x.order()
        xo, yo = max(xo, 0), max(yo, 0)
        forms = contract_forms(n, k, max(cap, yo + 3))
        F = embed(x)
        sign = -1 if x.r % 2 == 0 else 1
        G = Functional(chart, "forms", x.r + 1,
                       lambda v: sign * _val(F, forms.h(_recap(v, forms.chart))))
        return materialize_delta(G, xo, yo)

    def d(x):
        if isinstance(x, Functional):
            return base.d(x)
        if x.r == 0:
            return None
        return d_distribution(x)

    def degree(x):
        return x.degree if isinstance(x, Functional) else -x.r

    def is_zero(x):
        if isinstance(x, Functional):
            return base.is_zero(x)
        return x.is_zero()

    return Contraction("distributions", chart, include, project, h, d, degree,
                       is_zero=is_zero, note="point currents at 0")


def contract_generalized(n, k, bump=None, cap=4, battery=None):
    """Generalized functions: the transpose of the density contraction."""
    return transpose_contraction(contract_density(n, k, bump, cap), battery)
