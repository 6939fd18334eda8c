"""Seeded random forms, densities and point currents for property checks."""

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from .coeffs import DensityCoeff, FormalFunction, Poly, PwPoly
from .currents import DeltaCurrent, DensityCurrent
from .forms import Chart, FormalForm
from .indexcalc import enumerate_bi


def make_rng(seed=0):
    return random.Random(seed)


def rand_rational(rng, small=True):
    num = rng.randint(-4, 4) or 1
    den = rng.choice((1, 1, 2, 3)) if small else rng.randint(1, 9)
    return Fraction(num, den)


def _rand_exps(rng, m, max_deg):
    deg = rng.randint(0, max_deg)
    e = [0] * m
    if m:
        for i in rng.choices(range(m), k=deg):
            e[i] += 1
    return tuple(e)


def rand_poly(rng, nvars, max_deg, nterms=3, block=None):
    """Random polynomial; ``block`` = (lo, hi, cap) caps the degree in a block."""
    terms = {}
    for _ in range(nterms):
        e = _rand_exps(rng, nvars, max_deg)
        if block is not None:
            lo, hi, cap = block
            while sum(e[lo:hi]) > cap:
                e = _rand_exps(rng, nvars, max_deg)
        terms[e] = terms.get(e, 0) + rand_rational(rng)
    return Poly(nvars, terms)


def rand_function(rng, chart, x_deg=2, y_deg=None, nterms=3):
    n, k = chart.n, chart.k
    y_deg = chart.cap if y_deg is None else min(y_deg, chart.cap)
    terms = {}
    for _ in range(nterms):
        xe = _rand_exps(rng, n, x_deg)
        ye = _rand_exps(rng, k, y_deg)
        terms[xe + ye] = terms.get(xe + ye, 0) + rand_rational(rng)
    return FormalFunction(n, k, chart.cap, terms)


def rand_form(rng, chart, r=None, x_deg=2, y_deg=None, nterms=2):
    n, k = chart.n, chart.k
    if r is None:
        r = rng.randint(0, n + k)
    basis = enumerate_bi(n, k, r)
    terms = {}
    for bi in rng.sample(basis, min(len(basis), nterms)):
        terms[bi] = rand_function(rng, chart, x_deg, y_deg)
    return FormalForm(chart, r, terms)


def weight_bounded_form(rng, chart, r, px, py, nterms=3):
    """Random r-form with |beta| + |I| <= px and |M| + |J| <= py."""
    n, k = chart.n, chart.k
    basis = [bi for bi in enumerate_bi(n, k, r)
             if len(bi.x) <= px and len(bi.y) <= py]
    if not basis:
        return FormalForm.zero(chart, r)
    terms = {}
    for _ in range(nterms):
        bi = rng.choice(basis)
        xe = _rand_exps(rng, n, px - len(bi.x))
        ye = _rand_exps(rng, k, py - len(bi.y))
        f = FormalFunction(n, k, chart.cap, {xe + ye: rand_rational(rng)})
        terms[bi] = terms[bi] + f if bi in terms else f
    return FormalForm(chart, r, terms)


def rand_pw(rng, smooth=1):
    """Random compactly supported piecewise polynomial of class C^smooth.

    A short combination of shifted B-splines of degree smooth+1, each
    multiplied by a small polynomial.
    """
    deg = smooth + 1
    out = PwPoly()
    for _ in range(rng.randint(1, 2)):
        shift = Fraction(rng.randint(-2, 2), rng.choice((1, 2)))
        base = PwPoly.bspline(deg)
        b = PwPoly([x + shift for x in base.breaks],
                   [_shift(p, shift) for p in base.pieces])
        p = [rand_rational(rng) for _ in range(rng.randint(1, 2))]
        mono = PwPoly((b.breaks[0], b.breaks[-1]), [p])
        out = out + b * mono
    if not out:
        return rand_pw(rng, smooth)
    return out


def _shift(piece, s):
    from .coeffs import up_shift
    return up_shift(piece, -s)


def rand_density_coeff(rng, n, k, y_deg=2, smooth=1, nterms=None):
    nterms = nterms or rng.randint(1, 2)
    out = DensityCoeff.zero(n, k)
    for _ in range(nterms):
        pws = [rand_pw(rng, smooth) for _ in range(n)]
        ypoly = rand_poly(rng, k, y_deg, nterms=2) if k else Poly.const(0, rand_rational(rng))
        if not ypoly:
            ypoly = Poly.const(k, 1)
        out = out + DensityCoeff.from_tensor(pws, ypoly)
    return out


def rand_density(rng, chart, r=None, y_deg=2, smooth=1, nterms=2):
    n, k = chart.n, chart.k
    if r is None:
        r = rng.randint(0, n + k)
    basis = enumerate_bi(n, k, n + k - r)
    terms = {}
    for bi in rng.sample(basis, min(len(basis), nterms)):
        terms[bi] = rand_density_coeff(rng, n, k, y_deg, smooth)
    return DensityCurrent(chart, r, terms)


def rand_delta(rng, chart, r=None, origin=False, max_order=2, y_deg=2, nterms=3):
    n, k = chart.n, chart.k
    if r is None:
        r = rng.randint(0, n + k)
    basis = enumerate_bi(n, k, n + k - r)
    terms = {}
    for _ in range(nterms):
        bi = rng.choice(basis)
        a = tuple(Fraction(0) if origin else Fraction(rng.randint(-2, 2), rng.choice((1, 2)))
                  for _ in range(n))
        alpha = _rand_exps(rng, n, max_order)
        L = _rand_exps(rng, k, y_deg)
        key = (a, alpha, L, bi)
        terms[key] = terms.get(key, 0) + rand_rational(rng)
    return DeltaCurrent(chart, r, terms)


def rand_chart(rng, max_n=2, max_k=2, cap=4):
    return Chart(rng.randint(0, max_n), rng.randint(0, max_k), cap)
