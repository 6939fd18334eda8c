"""Finite cochain complexes over Q: assembly, ranks, Betti numbers, transposes,
tensor products and certification of contracting homotopies.

Matrices are sparse (list of row dicts) and act on column vectors, so the
coboundary of degree i has shape dim C^(i+1) x dim C^i.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .coeffs import DensityCoeff, FormalFunction, Poly, PwPoly, Q
from .currents import DensityCurrent, _exponents
from .forms import Chart, FormalForm
from .indexcalc import BiIndex, enumerate_bi, merge_sign


# ------------------------------------------------------------ matrices

class SparseMatrix:
    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        self.rows = [{j: Q(v) for j, v in r.items() if v} for r in rows]

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build from a list of {row: value} column dicts."""
        rows = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return cls(nrows, len(columns), rows)

    @classmethod
    def from_dense(cls, dense, ncols=None):
        ncols = ncols if ncols is not None else (len(dense[0]) if dense else 0)
        return cls(len(dense), ncols, [{j: v for j, v in enumerate(r) if v} for r in dense])

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    @property
    def shape(self):
        return self.nrows, self.ncols

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return not any(self.rows)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return "SparseMatrix(%d x %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz())

    def transpose(self):
        rows = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                rows[j][i] = v
        return SparseMatrix(self.ncols, self.nrows, rows)

    T = property(transpose)

    def scale(self, c):
        c = Q(c)
        return SparseMatrix(self.nrows, self.ncols,
                            [{j: v * c for j, v in r.items()} for r in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        rows = []
        for a, b in zip(self.rows, other.rows):
            r = dict(a)
            for j, v in b.items():
                nv = r.get(j, 0) + v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
            rows.append(r)
        return SparseMatrix(self.nrows, self.ncols, rows)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        rows = []
        for r in self.rows:
            acc = {}
            for k, v in r.items():
                for j, w in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + v * w
            rows.append({j: v for j, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, rows)

    def apply(self, vec):
        """Matrix times a sparse column vector {index: value}."""
        out = {}
        for i, r in enumerate(self.rows):
            s = sum((v * vec[j] for j, v in r.items() if j in vec), Fraction(0))
            if s:
                out[i] = s
        return out

    def column(self, j):
        return {i: r[j] for i, r in enumerate(self.rows) if j in r}

    def rank(self):
        return sparse_rank(self.rows)

    def kron(self, other):
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                rows.append({ja * other.ncols + jb: va * vb
                             for ja, va in ra.items() for jb, vb in rb.items()})
        return SparseMatrix(self.nrows * other.nrows, self.ncols * other.ncols, rows)


def sparse_rank(rows):
    """Rank by sparse Gaussian elimination on leading columns."""
    pivots = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {j: v * inv for j, v in r.items()}
                rank += 1
                break
            f = r[c]
            for j, v in p.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return rank


def bareiss_rank(dense):
    """Rank by fraction-free Bareiss elimination (rows scaled to integers first)."""
    m = []
    for row in dense:
        den = lcm(*(Q(v).denominator for v in row)) if row else 1
        m.append([int(Q(v) * den) for v in row])
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    rank, prev = 0, 1
    col = 0
    while rank < nr and col < nc:
        piv = next((i for i in range(rank, nr) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, nr):
            for j in range(col + 1, nc):
                m[i][j] = (m[i][j] * p - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = p
        rank += 1
        col += 1
    return rank


def solve_in_span(columns, target):
    """Coefficients x with sum x_j columns[j] == target (sparse dicts), or None."""
    keys = sorted({key for c in columns for key in c} | set(target))
    index = {key: i for i, key in enumerate(keys)}
    n = len(columns)
    # rows of the augmented system [A | b]
    rows = [{} for _ in keys]
    for j, c in enumerate(columns):
        for key, v in c.items():
            rows[index[key]][j] = Q(v)
    for key, v in target.items():
        rows[index[key]][n] = Q(v)
    pivots = {}
    for row in rows:
        r = {j: v for j, v in row.items() if v}
        while r:
            c = min(r)
            if c == n:
                return None       # inconsistent
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {j: v * inv for j, v in r.items()}
                break
            f = r[c]
            for j, v in p.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    x = {}
    for c in sorted(pivots, reverse=True):
        p = pivots[c]
        val = p.get(n, Fraction(0)) - sum((v * x.get(j, 0) for j, v in p.items()
                                           if j != c and j != n), Fraction(0))
        if val:
            x[c] = val
    return x


# ------------------------------------------------------------ complexes

class FiniteComplex:
    """Finite cochain complex: labels[i] for degrees lo..hi, d[i]: C^i -> C^(i+1)."""

    def __init__(self, labels, d, name=""):
        self.labels = {i: list(v) for i, v in labels.items()}
        degs = sorted(self.labels)
        self.lo, self.hi = (degs[0], degs[-1]) if degs else (0, -1)
        for i in range(self.lo, self.hi + 1):
            self.labels.setdefault(i, [])
        self.d = {}
        for i in range(self.lo, self.hi):
            m = d.get(i) or SparseMatrix.zeros(self.dim(i + 1), self.dim(i))
            if m.shape != (self.dim(i + 1), self.dim(i)):
                raise ValueError("d^%d has shape %s, expected %s"
                                 % (i, m.shape, (self.dim(i + 1), self.dim(i))))
            self.d[i] = m
        self.name = name
        self._index = None

    def degrees(self):
        return list(range(self.lo, self.hi + 1))

    def dim(self, i):
        return len(self.labels.get(i, ()))

    def dims(self):
        return [self.dim(i) for i in self.degrees()]

    def index(self, i, label):
        if self._index is None:
            self._index = {j: {lab: n for n, lab in enumerate(self.labels[j])}
                           for j in self.labels}
        return self._index[i][label]

    def dmat(self, i):
        """d^i, with zero maps off the ends."""
        if i in self.d:
            return self.d[i]
        return SparseMatrix.zeros(self.dim(i + 1), self.dim(i))

    def check_d_squared(self):
        return all((self.d[i + 1] @ self.d[i]).is_zero()
                   for i in range(self.lo, self.hi - 1))

    def __repr__(self):
        return "FiniteComplex(%s degrees %d..%d dims %s)" % (
            self.name, self.lo, self.hi, self.dims())


def betti(c, rank=None):
    """dim ker d^i - rank d^(i-1) for each degree lo..hi."""
    rank = rank or (lambda m: m.rank())
    ranks = {i: rank(m) for i, m in c.d.items()}
    return [c.dim(i) - ranks.get(i, 0) - ranks.get(i - 1, 0) for i in c.degrees()]


def betti_bareiss(c):
    return betti(c, rank=lambda m: bareiss_rank(m.to_dense()))


def _sign(e):
    return -1 if e % 2 else 1


def transpose(c):
    """Dual complex: degree i holds the dual of C^(-i), d_t^i = (-1)^i (d^(-i-1))^T."""
    labels = {-i: [("dual", lab) for lab in c.labels[i]] for i in c.degrees()}
    d = {}
    for i in range(-c.hi, -c.lo):
        d[i] = c.dmat(-i - 1).transpose().scale(_sign(i))
    return FiniteComplex(labels, d, name="transpose(%s)" % c.name)


def transpose_homotopy(h):
    """Homotopy on the dual complex: h_t^i = (-1)^(i-1) (h^(-i+1))^T."""
    return {-(j) + 1: m.transpose().scale(_sign(-j)) for j, m in h.items()}


def tensor(a, b):
    """Tensor product with d(u (x) v) = du (x) v + (-1)^|u| u (x) dv."""
    labels = {}
    slots = {}
    for i in a.degrees():
        for j in b.degrees():
            for p, la in enumerate(a.labels[i]):
                for q, lb in enumerate(b.labels[j]):
                    slots[(i, p, j, q)] = len(labels.setdefault(i + j, []))
                    labels[i + j].append((la, lb))
    lo, hi = a.lo + b.lo, a.hi + b.hi
    cols = {t: [dict() for _ in labels.get(t, ())] for t in range(lo, hi + 1)}
    for i in a.degrees():
        for j in b.degrees():
            da, db = a.dmat(i), b.dmat(j)
            for p in range(a.dim(i)):
                colA = da.column(p) if i < a.hi else {}
                for q in range(b.dim(j)):
                    src = slots[(i, p, j, q)]
                    col = cols[i + j][src]
                    for p2, v in colA.items():
                        col[slots[(i + 1, p2, j, q)]] = col.get(slots[(i + 1, p2, j, q)], 0) + v
                    if j < b.hi:
                        s = _sign(i)
                        for q2, v in db.column(q).items():
                            t = slots[(i, p, j + 1, q2)]
                            col[t] = col.get(t, 0) + s * v
    d = {}
    for t in range(lo, hi):
        d[t] = SparseMatrix.from_columns(len(labels.get(t + 1, ())), cols[t])
    return FiniteComplex(labels, d, name="(%s)x(%s)" % (a.name, b.name))


# -------------------------------------------------------- contractions

@dataclass
class MatrixContraction:
    """A complex with an augmentation and homotopy at the matrix level.

    ``inc`` is a column at degree 0 (the image of 1), ``proj`` a row at
    degree 0, and h[i]: C^i -> C^(i-1); the expected identity is
    d h + h d = id - inc proj at degree 0 and id elsewhere.
    """
    complex: FiniteComplex
    h: dict
    inc: dict
    proj: dict

    def projector(self, i):
        n = self.complex.dim(i)
        if i != 0:
            return SparseMatrix.zeros(n, n)
        rows = [{j: self.inc.get(r, 0) * v for j, v in self.proj.items()} for r in range(n)]
        return SparseMatrix(n, n, rows)

    def hmat(self, i):
        c = self.complex
        if i in self.h:
            return self.h[i]
        return SparseMatrix.zeros(c.dim(i - 1), c.dim(i))

    def augmented(self, side):
        """Complex with Q glued in: side 'below' (forms) or 'above' (densities).

        The homotopy is extended so that d h + h d = id exactly.
        """
        c = self.complex
        labels = dict(c.labels)
        d = dict(c.d)
        h = dict(self.h)
        n0 = c.dim(0)
        inc = SparseMatrix.from_columns(n0, [dict(self.inc)])
        proj = SparseMatrix(1, n0, [dict(self.proj)])
        if side == "below":
            if c.lo != 0:
                raise ValueError("forms-type augmentation needs lowest degree 0")
            labels[-1] = ["Q"]
            d[-1] = inc
            h[0] = proj
        else:
            if c.hi != 0:
                raise ValueError("density-type augmentation needs highest degree 0")
            labels[1] = ["Q"]
            d[0] = proj
            h[1] = inc
        out = FiniteComplex(labels, d, name=c.name + "+aug")
        return MatrixContraction(out, h, {}, {})

    def transpose(self):
        c = transpose(self.complex)
        return MatrixContraction(c, transpose_homotopy(self.h),
                                 dict(self.proj), dict(self.inc))


def tensor_contraction_matrices(A, B):
    """h = h_A (x) 1 + (inc_A proj_A) (x) h_B on the tensor complex."""
    c = tensor(A.complex, B.complex)
    a, b = A.complex, B.complex

    def slot(i, p, j, q):
        return c.index(i + j, (a.labels[i][p], b.labels[j][q]))

    cols = {t: [dict() for _ in c.labels[t]] for t in c.degrees()}
    for i in a.degrees():
        for j in b.degrees():
            ha = A.hmat(i) if i > a.lo else None
            hb = B.hmat(j) if j > b.lo else None
            for p in range(a.dim(i)):
                colA = ha.column(p) if ha is not None else {}
                pa = A.proj.get(p, 0) if i == 0 else 0
                for q in range(b.dim(j)):
                    col = cols[i + j][slot(i, p, j, q)]
                    for p2, v in colA.items():
                        t = slot(i - 1, p2, j, q)
                        col[t] = col.get(t, 0) + v
                    if pa and hb is not None:
                        for q2, w in hb.column(q).items():
                            for p2, u in A.inc.items():
                                t = slot(0, p2, j - 1, q2)
                                col[t] = col.get(t, 0) + pa * u * w
    h = {}
    for t in c.degrees():
        if t > c.lo:
            h[t] = SparseMatrix.from_columns(c.dim(t - 1), cols[t])
    inc, proj = {}, {}
    for p, u in A.inc.items():
        for q, w in B.inc.items():
            inc[slot(0, p, 0, q)] = u * w
    for p, u in A.proj.items():
        for q, w in B.proj.items():
            proj[slot(0, p, 0, q)] = u * w
    return MatrixContraction(c, h, inc, proj)


@dataclass
class CertificationReport:
    ok: bool
    checks: list = field(default_factory=list)
    failing_degree: int = None
    identity: str = ""
    witness: tuple = None

    def lines(self):
        out = ["certified=%s" % ("yes" if self.ok else "no")]
        for name, deg, good in self.checks:
            out.append("%s[%d]=%s" % (name, deg, "ok" if good else "FAIL"))
        if not self.ok:
            out.append("failing_degree=%d" % self.failing_degree)
            out.append("failing_identity=%s" % self.identity)
            label, residual = self.witness
            out.append("witness=%s" % (label,))
            out.append("residual=%s" % (residual,))
        return out


def certify_strong_exactness(c, h, projector=None):
    """Check d h + h d = id - P and d h d = d in every degree, exactly.

    ``h`` maps degree i to a matrix C^i -> C^(i-1); ``projector`` maps a
    degree to P (default zero, i.e. a contraction of an augmented complex).
    On failure the report names the first failing degree and a basis vector
    with its nonzero residual.
    """
    projector = projector or {}
    report = CertificationReport(ok=True)
    for i in c.degrees():
        n = c.dim(i)
        hi_ = h.get(i) if i > c.lo else None
        if hi_ is not None and hi_.shape != (c.dim(i - 1), n):
            raise ValueError("h^%d has shape %s, expected %s"
                             % (i, hi_.shape, (c.dim(i - 1), n)))
        hn = h.get(i + 1) if i < c.hi else None
        if hn is not None and hn.shape != (n, c.dim(i + 1)):
            raise ValueError("h^%d has shape %s, expected %s"
                             % (i + 1, hn.shape, (n, c.dim(i + 1))))
        total = SparseMatrix.zeros(n, n)
        if hi_ is not None and i > c.lo:
            total = total + c.dmat(i - 1) @ hi_
        if hn is not None and i < c.hi:
            total = total + hn @ c.dmat(i)
        if i in projector:
            total = total + projector[i]
        residual = total - SparseMatrix.identity(n)
        good = residual.is_zero()
        report.checks.append(("dh+hd", i, good))
        if not good and report.ok:
            j = next(j for j in range(n) if residual.column(j))
            report.ok = False
            report.failing_degree = i
            report.identity = "dh+hd=id-P"
            report.witness = (c.labels[i][j], _fmt_vec(residual.column(j)))
        if i < c.hi:
            dm = c.dmat(i)
            if hn is not None:
                resid = dm @ hn @ dm - dm
            else:
                resid = -dm
            good = resid.is_zero()
            report.checks.append(("dhd=d", i, good))
            if not good and report.ok:
                j = next(j for j in range(n) if resid.column(j))
                report.ok = False
                report.failing_degree = i
                report.identity = "dhd=d"
                report.witness = (c.labels[i][j], _fmt_vec(resid.column(j)))
    return report


def _fmt_vec(v):
    return "{" + ", ".join("%d: %s" % (i, v[i]) for i in sorted(v)) + "}"


# ------------------------------------------------------------- assembly

def form_basis(n, k, cap_x, cap_y, r, truncation="weight"):
    """Monomial labels (bi, x-exponents, y-exponents) of degree r."""
    out = []
    for bi in enumerate_bi(n, k, r):
        if truncation == "weight":
            bx, by = cap_x - len(bi.x), cap_y - len(bi.y)
        else:
            bx, by = cap_x, cap_y
        if bx < 0 or by < 0:
            continue
        for beta in _exponents(n, bx):
            for M in _exponents(k, by):
                out.append((bi, beta, M))
    return out


def _form_d_column(label, n, k):
    """d of x^beta y^M dx_I dy_J as {label: coefficient}."""
    bi, beta, M = label
    out = {}
    for kind, m, exps in (("x", n, beta), ("y", k, M)):
        for i in range(m):
            if not exps[i]:
                continue
            cov = BiIndex((i + 1,), ()) if kind == "x" else BiIndex((), (i + 1,))
            sign, new = merge_sign(cov, bi)
            if not sign:
                continue
            e = list(exps)
            e[i] -= 1
            lab = (new, tuple(e), M) if kind == "x" else (new, beta, tuple(e))
            out[lab] = out.get(lab, 0) + sign * exps[i]
    return out


def _columns_to_matrix(c_target_labels, columns):
    index = {lab: i for i, lab in enumerate(c_target_labels)}
    cols = []
    for col in columns:
        cc = {}
        for lab, v in col.items():
            if lab not in index:
                raise ValueError("operator leaves the truncated space at %r" % (lab,))
            cc[index[lab]] = v
        cols.append(cc)
    return SparseMatrix.from_columns(len(c_target_labels), cols)


def assemble_forms(n, k, cap_x, cap_y, truncation="weight"):
    labels = {r: form_basis(n, k, cap_x, cap_y, r, truncation) for r in range(n + k + 1)}
    d = {}
    for r in range(n + k):
        d[r] = _columns_to_matrix(labels[r + 1], [_form_d_column(lab, n, k) for lab in labels[r]])
    return FiniteComplex(labels, d, name="forms(%d,%d;%d,%d)" % (n, k, cap_x, cap_y))


def label_form(label, chart):
    bi, beta, M = label
    f = FormalFunction(chart.n, chart.k, chart.cap, {tuple(beta) + tuple(M): Fraction(1)})
    return FormalForm(chart, bi.degree, {bi: f})


def form_coordinates(omega):
    return {(bi, e[:omega.chart.n], e[omega.chart.n:]): c for bi, e, c in omega.monomials()}


def forms_contraction_matrices(n, k, cap_x, cap_y):
    """Matrices of the radial (x) formal contraction on the weight-truncated forms."""
    from .homotopy import contract_forms
    c = assemble_forms(n, k, cap_x, cap_y)
    chart = Chart(n, k, cap_y + 1)
    con = contract_forms(n, k, cap_y + 1)
    h = {}
    for r in range(1, n + k + 1):
        cols = [form_coordinates(con.h(label_form(lab, chart))) for lab in c.labels[r]]
        h[r] = _columns_to_matrix(c.labels[r - 1], cols)
    zero_label = (BiIndex((), ()), (0,) * n, (0,) * k)
    j = c.index(0, zero_label)
    return MatrixContraction(c, h, {j: Fraction(1)}, {j: Fraction(1)})


def assemble(chart, cap_x=6, cap_y=4, kind="forms", augmented=False,
             truncation="weight", window=6):
    """Truncated complex on a chart.

    kind 'forms': monomials x^b y^M dx_I dy_J.  With truncation 'weight'
    the bounds are |b|+|I| <= cap_x and |M|+|J| <= cap_y, which both d and
    the contraction preserve; 'coefficient' bounds |b| and |M| only (closed
    under d but not exact in top degrees).

    kind 'density': spline-window densities (quadratic and cubic B-splines
    on integer knots in [0, window] per axis) tensored with weight-truncated
    ys-polynomials, weight |L| + (dual y-degree) <= cap_y.
    """
    n, k = chart
    if cap_x < 0 or cap_y < 0:
        raise ValueError("caps must be nonnegative")
    if kind == "forms":
        if augmented:
            if truncation != "weight":
                c = assemble_forms(n, k, cap_x, cap_y, truncation)
                j = c.index(0, (BiIndex((), ()), (0,) * n, (0,) * k))
                mc = MatrixContraction(c, {}, {j: Fraction(1)}, {j: Fraction(1)})
                return mc.augmented("below").complex
            return forms_contraction_matrices(n, k, cap_x, cap_y).augmented("below").complex
        return assemble_forms(n, k, cap_x, cap_y, truncation)
    if kind == "density":
        mc = density_contraction_matrices(n, k, cap_y, window)
        return mc.augmented("above").complex if augmented else mc.complex
    raise ValueError("unsupported complex kind %r" % (kind,))


# ------------------------------------------------ spline-window densities

def _unit_cells(pw, window):
    """Coordinates of a PwPoly on the unit cells of [0, window]."""
    out = {}
    if pw.pieces and (pw.breaks[0] < 0 or pw.breaks[-1] > window):
        raise ValueError("function leaves the window")
    for m in range(window):
        for e, c in enumerate(pw._piece_at(Fraction(m), Fraction(m + 1))):
            if c:
                out[(m, e)] = c
    return out


def _spline(deg, j):
    return PwPoly.bspline(deg, j)


def axis_contraction_matrices(window=6, bump=None):
    """One axis: cubic splines (dual degree 1) -> quadratic splines dxs1."""
    from .homotopy import contract_density_axis
    bump = bump or PwPoly.bspline(2)
    con = contract_density_axis(bump)
    chart = con.chart
    top = BiIndex((1,), ())
    cubic = [("B3", j) for j in range(window - 3)]
    quad = [("B2", j) for j in range(window - 2)]
    cubic_cells = [_unit_cells(_spline(3, j), window) for j in range(window - 3)]
    quad_cells = [_unit_cells(_spline(2, j), window) for j in range(window - 2)]

    def cur(pw, r):
        bi = BiIndex((), ()) if r == 1 else top
        return DensityCurrent(chart, r, {bi: DensityCoeff.from_pw(pw)})

    def coords(eta, cells):
        tau = next(iter(eta.terms.values()), None)
        if tau is None:
            return {}
        x = solve_in_span(cells, _unit_cells(tau.to_pw(), window))
        if x is None:
            raise ValueError("operator leaves the spline window")
        return x

    dcols = [coords(con.d(cur(_spline(3, j), 1)), quad_cells) for j in range(len(cubic))]
    hcols = [coords(con.h(cur(_spline(2, j), 0)), cubic_cells) for j in range(len(quad))]
    c = FiniteComplex({-1: cubic, 0: quad}, {-1: SparseMatrix.from_columns(len(quad), dcols)},
                      name="axis[0,%d]" % window)
    inc = solve_in_span(quad_cells, _unit_cells(bump, window))
    proj = {j: Fraction(1) for j in range(len(quad))}     # every B-spline has integral 1
    return MatrixContraction(c, {0: SparseMatrix.from_columns(len(cubic), hcols)}, inc, proj)


def ystar_basis(k, cap_y, r):
    """Labels (bi, L) of ys-monomial densities on (R^0)^(k) of dual degree r."""
    out = []
    for bi in enumerate_bi(0, k, k - r):
        for L in _exponents(k, cap_y - r):
            out.append((bi, L))
    return out


def ystar_contraction_matrices(k, cap_y):
    from .homotopy import contract_density_y
    chart = Chart(0, k, cap_y + 1)
    con = contract_density_y(k, cap_y + 1)
    labels = {-r: ystar_basis(k, cap_y, r) for r in range(k + 1)}

    def elem(lab, r):
        bi, L = lab
        return DensityCurrent(chart, r, {bi: DensityCoeff(0, k, (), {(): Poly(k, {L: 1})})})

    def coords(eta):
        out = {}
        for bi, tau in eta.terms.items():
            for L, v in tau.cells.get((), Poly(k)).terms.items():
                out[(bi, L)] = v
        return out

    d, h = {}, {}
    for r in range(k + 1):
        if r > 0:
            d[-r] = _columns_to_matrix(labels[-r + 1],
                                       [coords(con.d(elem(lab, r))) for lab in labels[-r]])
        if r < k:
            h[-r] = _columns_to_matrix(labels[-r - 1],
                                       [coords(con.h(elem(lab, r))) for lab in labels[-r]])
    c = FiniteComplex(labels, d, name="ystar(%d;%d)" % (k, cap_y))
    full = BiIndex((), tuple(range(1, k + 1)))
    j = c.index(0, (full, (0,) * k))
    proj = {c.index(0, lab): Fraction(1) for lab in labels[0] if not any(lab[1])}
    return MatrixContraction(c, h, {j: Fraction(1)}, proj)


def density_contraction_matrices(n, k, cap_y=4, window=6, bump=None):
    """Spline-window density complex on (R^n)^(k) with its contraction, tensored axis by axis."""
    if window < 4:
        raise ValueError("window must be at least 4 (bump on [0,3] plus one cubic)")
    parts = [axis_contraction_matrices(window, bump) for _ in range(n)]
    if k or not parts:
        parts.append(ystar_contraction_matrices(k, cap_y))
    out = parts[0]
    for p in parts[1:]:
        out = tensor_contraction_matrices(out, p)
    return out
