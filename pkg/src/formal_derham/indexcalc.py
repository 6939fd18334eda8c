"""Multi-indices for basis covectors and every sign that comes with them.

A basis monomial dx_I dy_J on a chart (n, k) is stored as a ``BiIndex``:
a strictly increasing tuple of x-indices and a strictly increasing tuple
of y-indices.  The canonical order puts every dx before every dy, so the
slot of dx_i is i and the slot of dy_j is n + j.  Signs are computed by
counting inversions; no permutation matrices are ever built.
"""

from itertools import combinations
from math import comb
from typing import NamedTuple, Tuple


class DegenerateIndexError(ValueError):
    """An index tuple that is not strictly increasing or out of range."""


class BiIndex(NamedTuple):
    x: Tuple[int, ...] = ()
    y: Tuple[int, ...] = ()

    @property
    def degree(self):
        return len(self.x) + len(self.y)

    def __str__(self):
        return format_bi(self)


EMPTY = BiIndex((), ())


def check_multi(entries, ambient):
    """Validate a strictly increasing index tuple inside [1, ambient]."""
    entries = tuple(entries)
    prev = 0
    for e in entries:
        if not isinstance(e, int) or e <= prev or e > ambient:
            raise DegenerateIndexError(
                "bad multi-index %r for ambient %d" % (entries, ambient))
        prev = e
    return entries


def make_bi(x=(), y=(), n=None, k=None):
    """Build a BiIndex, validating against (n, k) when given."""
    x = tuple(x)
    y = tuple(y)
    check_multi(x, n if n is not None else (max(x) if x else 0))
    check_multi(y, k if k is not None else (max(y) if y else 0))
    return BiIndex(x, y)


def count_bi(n, k, r):
    return sum(comb(n, r - t) * comb(k, t) for t in range(r + 1))


def enumerate_bi(n, k, r):
    """All bi-indices of total degree r on (n, k).

    Ordered by the number of y-indices (ascending), then lexicographically
    on the x part and the y part.  Empty when r > n + k.
    """
    out = []
    if r < 0:
        return out
    for t in range(0, r + 1):
        s = r - t
        if s > n or t > k:
            continue
        for xs in combinations(range(1, n + 1), s):
            for ys in combinations(range(1, k + 1), t):
                out.append(BiIndex(xs, ys))
    return out


def shift_concat(i1, i2, offset):
    """(i1, offset + i2) as one strictly increasing tuple."""
    i1 = tuple(i1)
    if i1 and max(i1) > offset:
        raise DegenerateIndexError(
            "first block %r exceeds offset %d" % (i1, offset))
    return i1 + tuple(offset + e for e in i2)


def _inversions_two_sorted(a, b):
    # pairs (p in a, q in b) with p > q; both inputs sorted, disjoint
    inv = 0
    j = 0
    for p in a:
        while j < len(b) and b[j] < p:
            j += 1
        inv += j
    return inv


def merge_sign(a, b):
    """Sign and sorted union of dx_a dy_a ^ dx_b dy_b.

    Returns (0, None) when the two monomials share an index.  The sign
    does not need n: every x-slot sits before every y-slot.
    """
    if set(a.x) & set(b.x) or set(a.y) & set(b.y):
        return 0, None
    # moving b.x past a.y, then sorting x's and y's separately
    inv = len(a.y) * len(b.x)
    inv += _inversions_two_sorted(a.x, b.x)
    inv += _inversions_two_sorted(a.y, b.y)
    merged = BiIndex(tuple(sorted(a.x + b.x)), tuple(sorted(a.y + b.y)))
    return (-1 if inv & 1 else 1), merged


def complement(bi, n, k):
    """The bi-index of every slot not used by ``bi``."""
    xs = set(bi.x)
    ys = set(bi.y)
    return BiIndex(tuple(i for i in range(1, n + 1) if i not in xs),
                   tuple(j for j in range(1, k + 1) if j not in ys))


def epsilon_sign(a, b, n, k):
    """Sign of dx_a dy_a ^ dx_b dy_b against the volume form of (n, k).

    Zero unless a and b together use each slot exactly once.
    """
    if len(a.x) + len(b.x) != n or len(a.y) + len(b.y) != k:
        return 0
    sign, merged = merge_sign(a, b)
    if sign == 0:
        return 0
    if merged.x != tuple(range(1, n + 1)) or merged.y != tuple(range(1, k + 1)):
        return 0
    return sign


def kunneth_reindex(bi1, n1, k1, bi2, n2, k2):
    """Relabel a pair of factor bi-indices onto the product chart.

    The second factor's x's shift by n1 and its y's by k1.  The sign is
    (-1)^(|J1| |I2|), from carrying dx_{I2} past dy_{J1}.
    """
    check_multi(bi1.x, n1)
    check_multi(bi1.y, k1)
    check_multi(bi2.x, n2)
    check_multi(bi2.y, k2)
    sign = -1 if (len(bi1.y) * len(bi2.x)) & 1 else 1
    return sign, BiIndex(shift_concat(bi1.x, bi2.x, n1),
                         shift_concat(bi1.y, bi2.y, k1))


def split_bi(bi, n1, k1):
    """Inverse of kunneth_reindex: (sign, bi1, bi2)."""
    x1 = tuple(i for i in bi.x if i <= n1)
    x2 = tuple(i - n1 for i in bi.x if i > n1)
    y1 = tuple(j for j in bi.y if j <= k1)
    y2 = tuple(j - k1 for j in bi.y if j > k1)
    sign = -1 if (len(y1) * len(x2)) & 1 else 1
    return sign, BiIndex(x1, y1), BiIndex(x2, y2)


def insert_sign(bi, slot_kind, idx):
    """merge_sign of one extra covector placed in front of ``bi``."""
    new = BiIndex((idx,), ()) if slot_kind == "x" else BiIndex((), (idx,))
    return merge_sign(new, bi)


def format_bi(bi, x="dx", y="dy", empty=""):
    parts = ["%s%d" % (x, i) for i in bi.x] + ["%s%d" % (y, j) for j in bi.y]
    return "^".join(parts) if parts else empty
