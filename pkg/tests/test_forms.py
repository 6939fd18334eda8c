from itertools import combinations

import pytest

from formal_derham.forms import (Chart, ChartMorphism, Derivation, FormalForm,
                                 d, eval_on_derivations, pullback, wedge)
from formal_derham.indexcalc import BiIndex, enumerate_bi
from formal_derham.randgen import make_rng, rand_chart, rand_function, rand_form
from formal_derham.textio import parse_form


def P(src, n, k, cap=4):
    return parse_form(src, Chart(n, k, cap))


def test_d_examples():
    assert d(P("x1^2", 1, 0)) == P("(2*x1) dx1", 1, 0)
    for i in range(1, 5):
        want = P("(%d*y1^%d) dy1" % (i, i - 1), 0, 1, 5) if i > 1 else P("dy1", 0, 1, 5)
        assert d(P("y1^%d" % i, 0, 1, 5)) == want
    dxy = d(P("x1*y1", 1, 1))
    assert dxy == P("(y1) dx1 + (x1) dy1", 1, 1)
    assert d(dxy).is_zero()


def test_d_squared_zero_random():
    rng = make_rng(21)
    count = 0
    while count < 200:
        chart = rand_chart(rng, 3, 3, rng.randint(1, 4))
        top = chart.n + chart.k
        if top < 2:
            continue
        omega = rand_form(rng, chart, rng.randint(0, top - 2))
        assert d(d(omega)).is_zero()
        count += 1


def test_wedge_examples():
    c = Chart(1, 1, 4)
    dx, dy = P("dx1", 1, 1), P("dy1", 1, 1)
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(P("(x1) dx1", 1, 1), P("(y1) dy1", 1, 1)) == P("(x1*y1) dx1^dy1", 1, 1)
    f, g = P("x1 + y1", 1, 1), P("x1*y1^2", 1, 1)
    assert wedge(f, g) == P("x1^2*y1^2 + x1*y1^3", 1, 1)


def test_leibniz_supercommutativity_associativity():
    rng = make_rng(22)
    chart = Chart(2, 2, 8)
    for _ in range(100):
        a, b, c = (rand_form(rng, chart, rng.randint(0, 2), 2, 2) for _ in range(3))
        ab = wedge(a, b)
        assert ab == (-1) ** (a.r * b.r) * wedge(b, a)
        assert wedge(ab, c) == wedge(a, wedge(b, c))
        if a.r + b.r < 4:
            sign = -1 if a.r % 2 else 1
            assert d(ab) == wedge(d(a), b) + wedge(a, d(b)).scale(sign)


def _basis_fields(chart):
    return [Derivation.basis(chart, s) for s in range(chart.n + chart.k)]


def test_eval_examples():
    c = Chart(1, 1, 4)
    dx, dxdy = P("dx1", 1, 1), P("dx1^dy1", 1, 1)
    X, Y = _basis_fields(c)
    assert eval_on_derivations(dx, [X]) == c.one()
    assert eval_on_derivations(dx, [Y]).is_zero()
    assert eval_on_derivations(dxdy, [X, Y]) == c.one()
    assert eval_on_derivations(dxdy, [Y, X]) == -c.one()
    with pytest.raises(ValueError):
        eval_on_derivations(dxdy, [X])


def _rand_field(rng, chart):
    return Derivation(chart, [rand_function(rng, chart, 1, 1, 2)
                              for _ in range(chart.n + chart.k)])


def test_eval_alternating_and_linear():
    rng = make_rng(23)
    chart = Chart(2, 1, 6)
    for _ in range(20):
        omega = rand_form(rng, chart, 2, 1, 1)
        X, Y = _rand_field(rng, chart), _rand_field(rng, chart)
        f = rand_function(rng, chart, 1, 1, 2)
        assert eval_on_derivations(omega, [X, X]).is_zero()
        assert eval_on_derivations(omega, [X.scaled(f), Y]) == \
            f * eval_on_derivations(omega, [X, Y])


def test_wedge_matches_permutation_sum():
    from math import factorial
    from itertools import permutations
    from formal_derham.indexcalc import epsilon_sign
    for n, k in [(2, 0), (1, 1), (2, 1), (2, 2)]:
        chart = Chart(n, k, 4)
        fields = _basis_fields(chart)
        for r1 in range(n + k + 1):
            for r2 in range(n + k + 1 - r1):
                for b1 in enumerate_bi(n, k, r1):
                    for b2 in enumerate_bi(n, k, r2):
                        w1 = FormalForm.basis(chart, b1)
                        w2 = FormalForm.basis(chart, b2)
                        w = wedge(w1, w2)
                        for tup in combinations(range(n + k), r1 + r2):
                            total = 0
                            for perm in permutations(range(r1 + r2)):
                                sgn = 1
                                for i in range(len(perm)):
                                    for j in range(i + 1, len(perm)):
                                        if perm[i] > perm[j]:
                                            sgn = -sgn
                                args = [fields[tup[p]] for p in perm]
                                v1 = eval_on_derivations(w1, args[:r1])
                                v2 = eval_on_derivations(w2, args[r1:])
                                total += sgn * (v1 * v2).poly.terms.get((0,) * (n + k), 0)
                            total /= factorial(r1) * factorial(r2)
                            lhs = eval_on_derivations(w, [fields[t] for t in tup])
                            assert lhs.poly.terms.get((0,) * (n + k), 0) == total


def test_cartan_formula_on_polynomial_fields():
    # d omega (X0, X1) = X0(omega X1) - X1(omega X0) - omega([X0, X1])
    rng = make_rng(24)
    chart = Chart(2, 1, 8)
    for _ in range(20):
        omega = rand_form(rng, chart, 1, 2, 2)
        X, Y = _rand_field(rng, chart), _rand_field(rng, chart)
        lhs = eval_on_derivations(d(omega), [X, Y])
        rhs = X(eval_on_derivations(omega, [Y])) - Y(eval_on_derivations(omega, [X])) \
            - eval_on_derivations(omega, [X.bracket(Y)])
        assert lhs == rhs


def test_pullback_identity_and_square():
    rng = make_rng(25)
    chart = Chart(2, 2, 4)
    ident = ChartMorphism.identity(chart)
    for _ in range(30):
        omega = rand_form(rng, chart)
        assert pullback(ident, omega) == omega
    c = Chart(1, 0, 4)
    sq = ChartMorphism(c, c, [c.x(1, 2)], [])
    assert pullback(sq, P("dx1", 1, 0)) == P("(2*x1) dx1", 1, 0)


def _below_cap(omega):
    # d lowers y-degree, so only y-degrees < cap are determined after d
    cap, n = omega.chart.cap, omega.chart.n
    out = {}
    for bi, f in omega.terms.items():
        kept = {e: c for e, c in f.poly.terms.items() if sum(e[n:]) < cap}
        out[bi] = omega.chart.ff(kept)
    return FormalForm(omega.chart, omega.r, out)


def test_pullback_commutes_with_d():
    # exact below the top y-degree; at y-degree cap, d of the truncated
    # pullback misses the derivative of the dropped y^(cap+1) terms
    rng = make_rng(26)
    src, tgt = Chart(2, 1, 4), Chart(1, 2, 4)
    x1, x2, y1 = src.x(1), src.x(2), src.y(1)
    phi = ChartMorphism(src, tgt, [x1 + x2 * x2],
                        [y1 + x1 * y1 * y1, y1 * x2 + y1 * y1])
    for _ in range(30):
        omega = rand_form(rng, tgt, rng.randint(0, 2), 2, 2)
        assert _below_cap(pullback(phi, d(omega))) == _below_cap(d(pullback(phi, omega)))


def test_pullback_refuses_unsafe_substitution():
    c = Chart(1, 1, 4)
    with pytest.raises(ValueError):
        ChartMorphism(c, c, [c.x(1)], [c.y(1) + c.one()])
