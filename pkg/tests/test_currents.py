from fractions import Fraction

import pytest

from formal_derham.coeffs import DensityCoeff, Poly, PwPoly
from formal_derham.currents import (DeltaCurrent, DensityCurrent, compare_printed_rule,
                                    d_current, d_density, d_distribution, density_battery,
                                    embed, monomial_battery, pair, zeta)
from formal_derham.forms import Chart, FormalForm, d
from formal_derham.indexcalc import BiIndex
from formal_derham.randgen import make_rng, rand_delta, rand_density
from formal_derham.textio import parse_current, parse_form

TRI = PwPoly([0, 1, 2], [(0, 1), (2, -1)])


def C(src, chart):
    return parse_current(src, chart)


def F(src, chart):
    return parse_form(src, chart)


def test_pair_examples():
    c20 = Chart(2, 0, 4)
    bump = DensityCoeff.from_tensor([TRI, TRI], Poly.const(0, 1))
    eta = DensityCurrent(c20, 1, {BiIndex((1,), ()): bump})
    assert pair(F("dx2", c20), eta) == -1
    c11 = Chart(1, 1, 3)
    assert pair(F("y1^2", c11), C("pw-unit*(ys1^2)", c11)) == 2
    c10 = Chart(1, 0, 4)
    x2 = F("x1^2", c10)
    first = DeltaCurrent.point(c10, BiIndex((1,), ()), a=(0,), alpha=(1,))
    assert pair(x2, first) == 0
    first_at_1 = DeltaCurrent.point(c10, BiIndex((1,), ()), a=(1,), alpha=(1,))
    assert pair(x2, first_at_1) == 2


def test_pair_rejects_degree_mismatch():
    c = Chart(1, 0, 4)
    with pytest.raises(ValueError):
        pair(F("dx1", c), C("pw-unit", c))


def test_d_density_examples():
    c10 = Chart(1, 0, 4)
    B = PwPoly.bspline(2)
    eta = C("pw-unit dnil", c10)
    assert d_density(eta) == DensityCurrent.volume(c10, DensityCoeff.from_pw(B.derivative()))
    c01 = Chart(0, 1, 6)
    for i in range(4):
        eta = DensityCurrent(c01, 1, {BiIndex(): DensityCoeff.ystar_poly(0, 1, Poly.monomial((i,)))})
        out = d_density(eta)
        want = DensityCoeff.ystar_poly(0, 1, Poly.monomial((i + 1,)))
        assert out == DensityCurrent.volume(c01, want.scale(-1))
        # the sign is the one the transpose law forces (form degree 0)
        w = F("y1^%d" % (i + 1), c01)
        assert pair(w, out) == -pair(d(w), eta)


def test_transpose_law_densities():
    rng = make_rng(31)
    for n, k in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (1, 2)]:
        chart = Chart(n, k, 3)
        for s in range(n + k):
            battery = monomial_battery(chart, s, 2, 3)
            for _ in range(3):
                eta = rand_density(rng, chart, s + 1, y_deg=2)
                deta = d_density(eta)
                sign = -1 if s % 2 == 0 else 1
                for w in battery:
                    assert pair(w, deta) == sign * pair(d(w), eta)


def test_transpose_law_deltas_and_example():
    rng = make_rng(32)
    c10 = Chart(1, 0, 4)
    eta = DeltaCurrent.point(c10, BiIndex(), a=(1,))
    deta = d_distribution(eta)
    for p in (1, 2, 3):
        f = F("x1^%d" % p, c10)
        assert pair(f, deta) == -p      # -f'(1)
    for n, k in [(1, 1), (2, 0), (0, 2), (2, 1)]:
        chart = Chart(n, k, 3)
        for s in range(n + k):
            battery = monomial_battery(chart, s, 3, 3)
            for _ in range(3):
                eta = rand_delta(rng, chart, s + 1, max_order=1)
                deta = d_distribution(eta)
                sign = -1 if s % 2 == 0 else 1
                for w in battery:
                    assert pair(w, deta) == sign * pair(d(w), eta)


def test_d_squared_currents():
    rng = make_rng(33)
    for _ in range(100):
        n, k = rng.randint(0, 2), rng.randint(0, 2)
        if n + k < 2:
            continue
        chart = Chart(n, k, 3)
        r = rng.randint(2, n + k)
        assert d_density(d_density(rand_density(rng, chart, r))).is_zero()
        assert d_distribution(d_distribution(rand_delta(rng, chart, r))).is_zero()


def test_density_rule_agrees_with_solved_signs():
    agree, disagree, bad = compare_printed_rule(3, 3)
    assert agree > 0 and disagree == 0 and bad == []


def test_embed():
    rng = make_rng(34)
    chart = Chart(1, 1, 3)
    battery = monomial_battery(chart, 1, 2, 3)
    assert embed(DensityCurrent.zero(chart, 1)).vanishes_on(battery)
    for _ in range(20):
        a, b = rand_density(rng, chart, 1), rand_density(rng, chart, 1)
        lhs = embed(a + b.scale(3))
        rhs = embed(a) + embed(b).scale(3)
        assert lhs.agrees_with(rhs, battery)
        for w in battery[:6]:
            assert embed(a)(w) == pair(w, a)
    # embed then d equals d then embed, weakly
    battery0 = monomial_battery(chart, 0, 3, 3)
    for _ in range(10):
        eta = rand_density(rng, chart, 1)
        assert embed(eta).d().agrees_with(embed(d_density(eta)), battery0)


def test_zeta():
    c = Chart(2, 1, 3)
    B = PwPoly.bspline(2)
    unit = DensityCoeff.from_tensor([B, B], Poly.const(1, 1))
    assert zeta(DensityCurrent.volume(c, unit)) == 1
    ys = DensityCoeff.from_tensor([B, B], Poly.monomial((2,)))
    assert zeta(DensityCurrent.volume(c, ys)) == 0
    rng = make_rng(35)
    for _ in range(50):
        assert zeta(d_density(rand_density(rng, c, 1))) == 0
    with pytest.raises(ValueError):
        zeta(rand_density(rng, c, 1))
