from itertools import combinations, permutations
from math import comb

import pytest

from formal_derham.indexcalc import (BiIndex, DegenerateIndexError, complement,
                                     count_bi, enumerate_bi, epsilon_sign,
                                     kunneth_reindex, make_bi, merge_sign,
                                     shift_concat, split_bi)


def B(x=(), y=()):
    return BiIndex(tuple(x), tuple(y))


def perm_sign(seq):
    s = 1
    for i, j in combinations(range(len(seq)), 2):
        if seq[i] > seq[j]:
            s = -s
    return s


def slots(bi, n):
    return list(bi.x) + [n + j for j in bi.y]


def test_enumerate_examples():
    assert enumerate_bi(2, 1, 2) == [B((1, 2)), B((1,), (1,)), B((2,), (1,))]
    assert enumerate_bi(0, 0, 0) == [B()]
    assert enumerate_bi(1, 1, 3) == []


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("k", range(7))
def test_count_is_binomial_sum(n, k):
    for r in range(n + k + 2):
        want = sum(comb(n, s) * comb(k, r - s) for s in range(r + 1))
        assert len(enumerate_bi(n, k, r)) == want == count_bi(n, k, r)


def test_invalid_indices_rejected():
    with pytest.raises(DegenerateIndexError):
        make_bi((2, 1), (), 2, 0)
    with pytest.raises(DegenerateIndexError):
        make_bi((3,), (), 2, 0)


def test_shift_concat():
    assert shift_concat((1,), (1, 2), 2) == (1, 3, 4)
    assert shift_concat((), (), 5) == ()
    assert shift_concat((1, 2), (1,), 2) == (1, 2, 3)


def test_epsilon_examples():
    assert epsilon_sign(B((1,)), B((2,)), 2, 0) == 1
    assert epsilon_sign(B((2,)), B((1,)), 2, 0) == -1
    assert epsilon_sign(B((1,)), B((1,)), 1, 1) == 0
    assert epsilon_sign(B((), (1,)), B((1,)), 1, 1) == -1


def test_merge_examples():
    assert merge_sign(B((1,)), B((2,))) == (1, B((1, 2)))
    assert merge_sign(B((), (1,)), B((1,))) == (-1, B((1,), (1,)))
    assert merge_sign(B((1,)), B((1,)))[0] == 0


def test_epsilon_matches_permutation_count_exhaustively():
    for n in range(7):
        for k in range(7 - n):
            for r in range(n + k + 1):
                for a in enumerate_bi(n, k, r):
                    b = complement(a, n, k)
                    seq = slots(a, n) + slots(b, n)
                    assert epsilon_sign(a, b, n, k) == perm_sign(seq)


def test_merge_supercommutes():
    n, k = 3, 2
    for ra in range(n + k + 1):
        for rb in range(n + k + 1 - ra):
            for a in enumerate_bi(n, k, ra):
                for b in enumerate_bi(n, k, rb):
                    s1, m1 = merge_sign(a, b)
                    s2, m2 = merge_sign(b, a)
                    if s1:
                        assert m1 == m2
                        assert s1 == (-1) ** (ra * rb) * s2
                    else:
                        assert s2 == 0


def test_kunneth_reindex_examples():
    assert kunneth_reindex(B((), (1,)), 0, 1, B((1,)), 1, 0) == (-1, B((1,), (1,)))
    assert kunneth_reindex(B(), 0, 0, B(), 0, 0) == (1, B())
    assert kunneth_reindex(B((1,)), 1, 0, B((), (1,)), 0, 1) == (1, B((1,), (1,)))


def _all_bi(n, k):
    return [bi for r in range(n + k + 1) for bi in enumerate_bi(n, k, r)]


def test_kunneth_reindex_associative():
    shapes = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    for (n1, k1) in shapes:
        for (n2, k2) in shapes:
            for (n3, k3) in shapes:
                if n1 + k1 + n2 + k2 + n3 + k3 > 5:
                    continue
                for b1 in _all_bi(n1, k1):
                    for b2 in _all_bi(n2, k2):
                        for b3 in _all_bi(n3, k3):
                            s12, b12 = kunneth_reindex(b1, n1, k1, b2, n2, k2)
                            sl, left = kunneth_reindex(b12, n1 + n2, k1 + k2, b3, n3, k3)
                            s23, b23 = kunneth_reindex(b2, n2, k2, b3, n3, k3)
                            sr, right = kunneth_reindex(b1, n1, k1, b23, n2 + n3, k2 + k3)
                            assert left == right
                            assert s12 * sl == s23 * sr


def test_split_inverts_reindex():
    for n1, k1, n2, k2 in [(1, 1, 1, 1), (2, 0, 0, 2), (1, 2, 2, 1)]:
        for b1 in _all_bi(n1, k1):
            for b2 in _all_bi(n2, k2):
                s, bi = kunneth_reindex(b1, n1, k1, b2, n2, k2)
                s2, c1, c2 = split_bi(bi, n1, k1)
                assert (c1, c2) == (b1, b2) and s == s2
