from itertools import product

import pytest

from formal_derham.currents import (DeltaCurrent, d_density, d_distribution,
                                    embed, monomial_battery, pair, zeta)
from formal_derham.forms import Chart, FormalForm, d
from formal_derham.indexcalc import BiIndex, enumerate_bi
from formal_derham.kunneth import (TensorElement, boxtimes, d_tensor, product_chart,
                                   psi, psi_pair, split_current, split_form)
from formal_derham.randgen import make_rng, rand_delta, rand_density, rand_form
from formal_derham.textio import parse_current, parse_form


def test_d_tensor_examples():
    c10, c01 = Chart(1, 0, 4), Chart(0, 1, 4)
    x, y = parse_form("x1", c10), parse_form("y1", c01)
    dx, dy = parse_form("dx1", c10), parse_form("dy1", c01)
    t = d_tensor(TensorElement.pure(x, y))
    want = TensorElement(c10, c01, [(dx, y), (x, dy)])
    assert t.normal_form() == want.normal_form()
    t = d_tensor(TensorElement.pure(dx, y))
    assert t.normal_form() == TensorElement(c10, c01, [(dx.scale(-1), dy)]).normal_form()


def test_d_tensor_squares_to_zero_and_psi_is_chain_map():
    rng = make_rng(41)
    c1, c2 = Chart(1, 1, 3), Chart(1, 1, 3)
    for _ in range(100):
        a = rand_form(rng, c1, rng.randint(0, 1), 2, 1)
        b = rand_form(rng, c2, rng.randint(0, 1), 2, 1)
        t = TensorElement.pure(a, b)
        assert d_tensor(d_tensor(t)).is_zero()
        assert d(psi(t, cap=6)) == psi(d_tensor(t), cap=6)


def test_psi_examples():
    c0 = Chart(0, 0, 0)
    one = FormalForm.function(c0.one(), c0)
    assert psi_pair(one, one) == one
    c01, c10 = Chart(0, 1, 2), Chart(1, 0, 2)
    out = psi_pair(parse_form("dy1", c01), parse_form("dx1", c10))
    assert out == parse_form("-dx1^dy1", product_chart(c01, c10))


def _monomial_forms(chart, r, cap):
    from formal_derham.currents import _exponents
    out = []
    for bi in enumerate_bi(chart.n, chart.k, r):
        for beta in _exponents(chart.n, cap):
            for M in _exponents(chart.k, cap):
                f = chart.ff({tuple(beta) + tuple(M): 1})
                out.append(FormalForm(chart, r, {bi: f}))
    return out


def test_psi_is_signed_permutation_on_monomials():
    shapes = [(a, b) for a in range(3) for b in range(3) if 0 < a + b <= 2]
    for (n1, k1), (n2, k2) in product(shapes, repeat=2):
        c1, c2 = Chart(n1, k1, 1), Chart(n2, k2, 1)
        for r in range(n1 + k1 + n2 + k2 + 1):
            images = {}
            for r1 in range(r + 1):
                for w1 in _monomial_forms(c1, r1, 1):
                    for w2 in _monomial_forms(c2, r - r1, 1):
                        out = psi_pair(w1, w2)
                        mons = list(out.monomials())
                        assert len(mons) == 1
                        bi, e, c = mons[0]
                        assert c in (1, -1)
                        assert (bi, e) not in images
                        images[(bi, e)] = c


def test_psi_associative():
    rng = make_rng(42)
    c1, c2, c3 = Chart(1, 0, 2), Chart(0, 1, 2), Chart(1, 1, 2)
    for _ in range(30):
        a, b, c = (rand_form(rng, ch, None, 1, 1) for ch in (c1, c2, c3))
        left = psi_pair(psi_pair(a, b), c)
        right = psi_pair(a, psi_pair(b, c))
        assert left == right


def test_split_form_inverts_psi():
    rng = make_rng(43)
    c1, c2 = Chart(1, 1, 2), Chart(1, 0, 2)
    for _ in range(20):
        a, b = rand_form(rng, c1, None, 1, 1), rand_form(rng, c2, None, 1, 1)
        w = psi_pair(a, b)
        back = psi(split_form(w, c1, c2))
        assert back == w


def test_zeta_multiplicative():
    rng = make_rng(44)
    c1, c2 = Chart(1, 0, 2), Chart(1, 1, 2)
    for _ in range(10):
        e1, e2 = rand_density(rng, c1, 0), rand_density(rng, c2, 0)
        assert zeta(boxtimes(e1, e2)) == zeta(e1) * zeta(e2)


def test_pairing_law_exhaustive_deltas():
    shapes = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    for (n1, k1), (n2, k2) in product(shapes, repeat=2):
        c1, c2 = Chart(n1, k1, 1), Chart(n2, k2, 1)
        for r1 in range(n1 + k1 + 1):
            for r2 in range(n2 + k2 + 1):
                for w1 in _monomial_forms(c1, r1, 1):
                    for w2 in _monomial_forms(c2, r2, 1):
                        (bi1, e1, _), = w1.monomials()
                        (bi2, e2, _), = w2.monomials()
                        from formal_derham.indexcalc import complement
                        d1 = DeltaCurrent.point(c1, complement(bi1, n1, k1),
                                                alpha=e1[:n1], L=e1[n1:])
                        d2 = DeltaCurrent.point(c2, complement(bi2, n2, k2),
                                                alpha=e2[:n2], L=e2[n2:])
                        lhs = pair(psi_pair(w1, w2), boxtimes(d1, d2))
                        rhs = (-1) ** (r1 * r2) * pair(w1, d1) * pair(w2, d2)
                        assert lhs == rhs and rhs != 0


def test_pairing_law_random_densities():
    rng = make_rng(45)
    c1, c2 = Chart(1, 0, 2), Chart(0, 1, 2)
    for _ in range(15):
        r1, r2 = rng.randint(0, 1), rng.randint(0, 1)
        w1, w2 = rand_form(rng, c1, r1, 2, 0), rand_form(rng, c2, r2, 0, 2)
        e1, e2 = rand_density(rng, c1, r1), rand_density(rng, c2, r2)
        lhs = pair(psi_pair(w1, w2), boxtimes(e1, e2))
        assert lhs == (-1) ** (r1 * r2) * pair(w1, e1) * pair(w2, e2)


def test_boxtimes_chain_map_sign():
    # d(e1 x e2) = d e1 x e2 + (-1)^r1 e1 x d e2, exactly
    rng = make_rng(46)
    c1, c2 = Chart(1, 1, 3), Chart(1, 0, 3)
    for _ in range(20):
        r1, r2 = rng.randint(1, 2), 1
        e1, e2 = rand_density(rng, c1, r1), rand_density(rng, c2, r2)
        lhs = d_density(boxtimes(e1, e2))
        sign = -1 if r1 % 2 else 1
        rhs = boxtimes(d_density(e1), e2) + boxtimes(e1, d_density(e2)).scale(sign)
        assert lhs == rhs
    for _ in range(20):
        r1, r2 = rng.randint(1, 2), 1
        e1, e2 = rand_delta(rng, c1, r1), rand_delta(rng, c2, r2)
        lhs = d_distribution(boxtimes(e1, e2))
        sign = -1 if r1 % 2 else 1
        rhs = boxtimes(d_distribution(e1), e2) + boxtimes(e1, d_distribution(e2)).scale(sign)
        assert lhs == rhs


def test_boxtimes_of_embeddings():
    rng = make_rng(47)
    c1, c2 = Chart(1, 0, 2), Chart(0, 1, 2)
    prod = product_chart(c1, c2)
    for _ in range(5):
        e1, e2 = rand_density(rng, c1, 1), rand_density(rng, c2, 0)
        battery = monomial_battery(prod, 1, 2, 2)
        F = embed(boxtimes(e1, e2))
        for w in battery:
            w1w2 = split_form(w, c1, c2)
            total = sum(pair(a, e1) * pair(b, e2) * (-1) ** (a.r * b.r)
                        for a, b in w1w2.pairs if a.r == 1 and b.r == 0)
            assert F(w) == total


def test_boxtimes_rejects_mixed_kinds():
    rng = make_rng(48)
    c = Chart(1, 0, 2)
    with pytest.raises((TypeError, ValueError)):
        boxtimes(rand_density(rng, c, 0), rand_delta(rng, c, 0))


def test_split_current_roundtrip():
    rng = make_rng(49)
    c1, c2 = Chart(1, 0, 2), Chart(0, 1, 2)
    for _ in range(5):
        e1, e2 = rand_delta(rng, c1, 1), rand_delta(rng, c2, 0)
        prod = boxtimes(e1, e2)
        t = split_current(prod, c1, c2)
        from formal_derham.kunneth import boxtimes_sum
        assert boxtimes_sum(t) == prod
