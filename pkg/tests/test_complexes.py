import random
from fractions import Fraction

import pytest

from formal_derham.complexes import (FiniteComplex, SparseMatrix, assemble, assemble_forms,
                                     bareiss_rank, betti, betti_bareiss,
                                     certify_strong_exactness, density_contraction_matrices,
                                     form_coordinates, forms_contraction_matrices,
                                     label_form, solve_in_span, sparse_rank, tensor,
                                     transpose)
from formal_derham.forms import Chart, d


def _certify(mc):
    proj = {0: mc.projector(0)}
    return certify_strong_exactness(mc.complex, mc.h, proj)


def test_assemble_examples():
    c = assemble((1, 0), cap_x=2, cap_y=0, truncation="coefficient")
    assert c.dims() == [3, 3]
    # d is differentiation: x^p -> p x^(p-1) dx
    dense = c.dmat(0).to_dense()
    assert [sorted(v for v in row if v) for row in dense] == [[1], [2], []]
    assert assemble((1, 0), cap_x=2, cap_y=0).dims() == [3, 2]
    triv = assemble((0, 0), 3, 3, augmented=True)
    assert triv.dims() == [1, 1] and betti(triv) == [0, 0]
    with pytest.raises(ValueError):
        assemble((1, 0), kind="nope")


@pytest.mark.parametrize("kind", ["forms", "density"])
def test_d_squared_everywhere(kind):
    for n in range(3):
        for k in range(3):
            if kind == "density" and n + k == 0:
                continue
            for aug in (False, True):
                c = assemble((n, k), 3, 2, kind, aug)
                assert c.check_d_squared()


def test_betti_examples():
    assert betti(assemble((1, 1), 2, 2, augmented=True)) == [0, 0, 0, 0]
    assert betti(assemble((1, 1), 2, 2)) == [1, 0, 0]
    zero = FiniteComplex({0: ["a", "b"], 1: ["c"]}, {})
    assert betti(zero) == [2, 1]


def test_transpose_properties():
    c = assemble((1, 1), 2, 2)
    t = transpose(c)
    assert betti(t) == list(reversed(betti(c)))
    tt = transpose(t)
    for i in c.degrees():
        assert tt.dmat(i) == c.dmat(i).scale(-1)   # (-1)^i (-1)^(-i-1) = -1
        assert len(tt.labels[i]) == len(c.labels[i])
    one = FiniteComplex({0: ["u"], 1: ["v"]}, {0: SparseMatrix.from_dense([[3]])})
    assert transpose(one).dmat(-1).to_dense() == [[-3]]
    two = FiniteComplex({-1: ["u"], 0: ["v"]}, {-1: SparseMatrix.from_dense([[3]])})
    assert transpose(two).dmat(0).to_dense() == [[3]]


def test_forms_matrices_match_d():
    for n, k in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]:
        c = assemble_forms(n, k, 3, 3)
        chart = Chart(n, k, 3)
        for r in range(n + k):
            m = c.dmat(r)
            for j, lab in enumerate(c.labels[r]):
                want = form_coordinates(d(label_form(lab, chart)))
                got = {c.labels[r + 1][i]: v for i, v in m.column(j).items()}
                assert got == want


def test_certify_formal_contraction():
    rep = _certify(forms_contraction_matrices(0, 2, 0, 3))
    assert rep.ok, rep.lines()
    rep = _certify(forms_contraction_matrices(2, 1, 3, 2))
    assert rep.ok


def test_certify_density_contraction():
    rep = _certify(density_contraction_matrices(1, 1, cap_y=3))
    assert rep.ok, rep.lines()
    aug = density_contraction_matrices(1, 1, cap_y=3).augmented("above")
    assert certify_strong_exactness(aug.complex, aug.h).ok
    assert betti(aug.complex) == [0] * len(aug.complex.degrees())


def test_random_homotopy_fails_with_witness():
    rng = random.Random(7)
    mc = forms_contraction_matrices(1, 1, 2, 2)
    c = mc.complex
    h = {i: SparseMatrix.from_dense([[rng.randint(-2, 2) for _ in range(c.dim(i))]
                                     for _ in range(c.dim(i - 1))], c.dim(i))
         for i in range(c.lo + 1, c.hi + 1)}
    rep = certify_strong_exactness(c, h, {0: mc.projector(0)})
    assert not rep.ok
    assert rep.failing_degree in c.degrees()
    label, residual = rep.witness
    assert label in c.labels[rep.failing_degree] and residual != "{}"
    assert any(line.startswith("failing_degree=") for line in rep.lines())


def test_certify_rejects_bad_shapes():
    c = assemble((1, 0), 2, 0)
    with pytest.raises(ValueError):
        certify_strong_exactness(c, {1: SparseMatrix.zeros(5, 5)})


def test_transposed_contraction_certifies():
    mc = forms_contraction_matrices(1, 1, 2, 2).augmented("below")
    t = mc.transpose()
    assert certify_strong_exactness(t.complex, t.h).ok


def test_tensor_complex_betti_multiply():
    a = assemble((1, 0), 2, 0)
    b = assemble((0, 1), 0, 2)
    t = tensor(a, b)
    assert t.check_d_squared()
    assert betti(t) == [1, 0, 0]


def test_rank_oracle_agreement():
    rng = random.Random(8)
    for _ in range(60):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        dense = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if rng.random() < 0.5 else 0
                  for _ in range(cols)] for _ in range(rows)]
        m = SparseMatrix.from_dense(dense, cols)
        assert m.rank() == bareiss_rank(dense) == m.T.rank()
    c = assemble((2, 1), 3, 2, augmented=True)
    assert betti(c) == betti_bareiss(c)


def test_solve_in_span():
    cols = [{0: 1, 1: 1}, {1: 1, 2: 1}]
    coeffs = solve_in_span(cols, {0: 2, 1: 5, 2: 3})
    assert coeffs == {0: 2, 1: 3}
    assert solve_in_span(cols, {0: 1}) is None
