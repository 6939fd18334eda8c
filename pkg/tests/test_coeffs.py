from fractions import Fraction

import pytest

from formal_derham.coeffs import (DensityCoeff, FormalFunction, Poly, PwPoly,
                                  ff_mul, ff_partial, integrate_density,
                                  pw_antideriv, pw_star)
from formal_derham.randgen import make_rng, rand_function, rand_pw
from formal_derham.forms import Chart

F = Fraction
TRI = PwPoly([0, 1, 2], [(0, 1), (2, -1)])      # x on [0,1], 2 - x on [1,2]


def test_truncated_products():
    one_plus = FormalFunction(0, 1, 2, {(0,): 1, (1,): 1})
    one_minus = FormalFunction(0, 1, 2, {(0,): 1, (1,): -1})
    prod = ff_mul(one_plus, one_minus)
    assert prod.poly == Poly(1, {(0,): 1, (2,): -1}) and not prod.truncated
    xy = FormalFunction(1, 1, 1, {(1, 1): 1})
    y = FormalFunction(1, 1, 1, {(0, 1): 1})
    out = ff_mul(xy, y)
    assert out.is_zero() and out.truncated


def test_truncation_flag_only_for_nonzero_drops():
    a = FormalFunction(0, 1, 1, {(1,): 1})
    assert not ff_mul(a, FormalFunction(0, 1, 1, {})).truncated


def test_multiplicative_identity_and_ring_axioms():
    rng = make_rng(11)
    chart = Chart(2, 2, 6)
    one = FormalFunction.const(2, 2, 6)
    for _ in range(200):
        a, b, c = (rand_function(rng, chart, 2, 2) for _ in range(3))
        assert ff_mul(a, one) == a
        assert ff_mul(ff_mul(a, b), c) == ff_mul(a, ff_mul(b, c))
        assert ff_mul(a, b + c) == ff_mul(a, b) + ff_mul(a, c)


def test_partials():
    y3 = FormalFunction(0, 1, 4, {(3,): 1})
    assert ff_partial(y3, ("y", 1)) == FormalFunction(0, 1, 4, {(2,): 3})
    f = FormalFunction(2, 0, 0, {(2, 1): 1})
    assert ff_partial(f, ("x", 1)) == FormalFunction(2, 0, 0, {(1, 1): 2})


def test_mixed_partials_and_leibniz():
    rng = make_rng(12)
    chart = Chart(2, 2, 8)
    for _ in range(50):
        f = rand_function(rng, chart, 3, 3)
        g = rand_function(rng, chart, 3, 3)
        assert ff_partial(ff_partial(f, ("x", 1)), ("y", 2)) == \
            ff_partial(ff_partial(f, ("y", 2)), ("x", 1))
        fg = ff_mul(f, g)
        assert not fg.truncated
        for axis in (("x", 2), ("y", 1)):
            assert ff_partial(fg, axis) == \
                ff_mul(ff_partial(f, axis), g) + ff_mul(f, ff_partial(g, axis))


def test_antiderivative_triangle():
    A = pw_antideriv(TRI)
    assert TRI.integral() == 1
    assert A(1) == F(1, 2)
    assert A(-5) == 0 and A(10) == 1
    zero = pw_antideriv(PwPoly())
    assert zero(3) == 0


def test_antiderivative_differentiates_back():
    rng = make_rng(13)
    for _ in range(30):
        f = rand_pw(rng, 1)
        A = pw_antideriv(f)
        lo, hi = f.support()
        for j in range(len(f.breaks) - 1):
            mid = (f.breaks[j] + f.breaks[j + 1]) / 2
            piece = A.body._piece_at(mid, mid)
            dp = [piece[i] * i for i in range(1, len(piece))]
            val = sum(c * mid ** i for i, c in enumerate(dp))
            assert val == f(mid)


def test_star_properties():
    rng = make_rng(14)
    bump = PwPoly.bspline(2)
    assert bump.integral() == 1
    for _ in range(30):
        f, g = rand_pw(rng, 1), rand_pw(rng, 1)
        assert pw_star(f, f).is_zero()
        assert pw_star(f, g) == -pw_star(g, f)
        assert pw_star(f, g).derivative() == g.scale(f.integral()) - f.scale(g.integral())
        h = rand_pw(rng, 1)
        assert pw_star(f + h, g) == pw_star(f, g) + pw_star(h, g)
    # mean-zero f against a unit bump: the derivative recovers -f
    f = TRI - PwPoly.bspline(1, 3)
    assert f.integral() == 0
    assert pw_star(f, bump).derivative() == -f


def test_bspline_smoothness_tag():
    assert PwPoly.bspline(2).smoothness == 1
    assert TRI.smoothness == 0
    assert PwPoly([0, 1], [(1,)]).smoothness == -1


def test_integrate_density_examples():
    B = PwPoly.bspline(2)
    tau = DensityCoeff.from_tensor([B], Poly(1, {(2,): 1}))
    y2 = FormalFunction(1, 1, 4, {(0, 2): 1})
    y1 = FormalFunction(1, 1, 4, {(0, 1): 1})
    assert integrate_density(tau, y2) == 2
    assert integrate_density(tau, y1) == 0
    tri = DensityCoeff.from_tensor([TRI], Poly(0, {(): 1}))
    assert integrate_density(tri, FormalFunction(1, 0, 0, {(1,): 1})) == 1


def test_integrate_density_bilinear():
    rng = make_rng(15)
    chart = Chart(1, 1, 4)
    for _ in range(20):
        t1 = DensityCoeff.from_tensor([rand_pw(rng)], Poly(1, {(1,): 2, (0,): 1}))
        t2 = DensityCoeff.from_tensor([rand_pw(rng)], Poly(1, {(2,): -1}))
        f = rand_function(rng, chart, 2, 2)
        g = rand_function(rng, chart, 2, 2)
        assert integrate_density(t1 + t2, f) == integrate_density(t1, f) + integrate_density(t2, f)
        assert integrate_density(t1, f + g) == integrate_density(t1, f) + integrate_density(t1, g)
        assert integrate_density(t1.scale(F(3, 2)), f) == F(3, 2) * integrate_density(t1, f)


def test_density_split_reassembles():
    rng = make_rng(16)
    from formal_derham.randgen import rand_density_coeff
    for _ in range(10):
        tau = rand_density_coeff(rng, 2, 1)
        total = DensityCoeff.zero(2, 1)
        for left, right in tau.split(1, 0):
            total = total + left.tensor(right)
        assert total == tau


def test_discontinuous_derivative_refused():
    from formal_derham.coeffs import DiscontinuityError
    box = DensityCoeff.from_pw(PwPoly([0, 1], [(1,)]))
    with pytest.raises(DiscontinuityError):
        box.diff_x(0)
