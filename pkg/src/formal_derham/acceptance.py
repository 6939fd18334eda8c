"""Executable acceptance suites.

Each suite returns a SuiteResult with named sub-checks; a suite passes only
if every sub-check holds exactly and the suite finished inside its time
budget.  ``run_all`` is what ``selftest`` calls.
"""

import io
import time
from contextlib import redirect_stdout
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .coeffs import FormalFunction, pw_star
from .complexes import (betti, certify_strong_exactness,
                        density_contraction_matrices,
                        forms_contraction_matrices)
from .currents import (DeltaCurrent, DensityCurrent, d_density, d_distribution,
                       dual_d_table, embed, monomial_battery, pair)
from .forms import Chart, Derivation, FormalForm, d, eval_on_derivations, wedge
from .homotopy import (contract_density, contract_forms, default_bump,
                       transpose_contraction)
from .indexcalc import BiIndex, complement, enumerate_bi, merge_sign
from .kunneth import TensorElement, boxtimes, d_tensor, psi, psi_pair
from .randgen import (make_rng, rand_delta, rand_density, rand_form, rand_pw)


@dataclass
class SuiteResult:
    number: int
    title: str
    budget: float
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    error: str = ""

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    @property
    def passed(self):
        return (not self.error and all(ok for _, ok, _ in self.checks)
                and self.seconds < self.budget)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return "[%s] %d. %s (%.2fs, budget %gs)" % (status, self.number, self.title,
                                                   self.seconds, self.budget)

    def details(self):
        out = []
        for name, ok, detail in self.checks:
            out.append("    %s %s%s" % ("ok  " if ok else "FAIL", name,
                                        (": " + detail) if detail else ""))
        if self.error:
            out.append("    ERROR " + self.error)
        if self.seconds >= self.budget:
            out.append("    FAIL over time budget")
        return out


def _suite(number, title, budget):
    def wrap(fn):
        def run(seed=0):
            res = SuiteResult(number, title, budget)
            t0 = time.perf_counter()
            try:
                fn(res, seed)
            except Exception as exc:     # reported, never swallowed silently
                res.error = "%s: %s" % (type(exc).__name__, exc)
            res.seconds = time.perf_counter() - t0
            return res
        run.number = number
        run.title = title
        return run
    return wrap


# ------------------------------------------------------------ 1. d laws

@_suite(1, "differential laws: d d = 0 and graded Leibniz", 5)
def differential_laws(res, seed):
    rng = make_rng(seed)
    n_dd = n_leib = 0
    bad_dd = bad_leib = truncated = 0
    while n_dd < 220 or n_leib < 220:
        chart = Chart(rng.randint(0, 3), rng.randint(0, 3), 4)
        top = chart.n + chart.k
        w = rand_form(rng, chart, rng.randint(0, max(top - 2, 0)), 2, 2)
        dw = d(w)
        if w.r + 2 <= top:
            n_dd += 1
            bad_dd += bool(d(dw))
        v = rand_form(rng, chart, None, 2, 2)
        prod = wedge(w, v)
        if prod.truncated:
            truncated += 1
            continue
        n_leib += 1
        sign = -1 if w.r % 2 else 1
        rhs = wedge(dw, v) + wedge(w, d(v)).scale(sign)
        bad_leib += (d(prod) != rhs)
    res.add("d d = 0 on %d random forms" % n_dd, bad_dd == 0 and n_dd >= 200,
            "%d failures" % bad_dd)
    res.add("Leibniz on %d random pairs" % n_leib, bad_leib == 0 and n_leib >= 200,
            "%d failures, %d truncated pairs skipped" % (bad_leib, truncated))


# ---------------------------------------------------------- 2. wedge

def _perm_sign(p):
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _alternation_wedge(w1, w2, fields):
    """The permutation-sum definition evaluated on derivations."""
    r, s = w1.r, w2.r
    total = None
    for p in permutations(range(r + s)):
        a = eval_on_derivations(w1, [fields[i] for i in p[:r]])
        b = eval_on_derivations(w2, [fields[i] for i in p[r:]])
        term = a * b
        if _perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    fact = 1
    for m in range(2, r + 1):
        fact *= m
    for m in range(2, s + 1):
        fact *= m
    return total.scale(Fraction(1, fact))


@_suite(2, "wedge equals the permutation-sum definition", 10)
def wedge_oracle(res, seed):
    count = bad = 0
    for n in range(5):
        for k in range(5 - n):
            chart = Chart(n, k, 2)
            fields = [Derivation.basis(chart, a) for a in range(n + k)]
            for r1 in range(5):
                for r2 in range(5 - r1):
                    if r1 + r2 > n + k:
                        continue
                    for b1 in enumerate_bi(n, k, r1):
                        for b2 in enumerate_bi(n, k, r2):
                            w1 = FormalForm.basis(chart, b1)
                            w2 = FormalForm.basis(chart, b2)
                            prod = wedge(w1, w2)
                            for slots in combinations(range(n + k), r1 + r2):
                                fs = [fields[a] for a in slots]
                                lhs = eval_on_derivations(prod, fs)
                                rhs = _alternation_wedge(w1, w2, fs)
                                count += 1
                                if lhs != rhs:
                                    bad += 1
    res.add("all basis pairs with r1+r2 <= 4, n+k <= 4 (%d evaluations)" % count,
            bad == 0, "%d mismatches" % bad)


# -------------------------------------------------------- 3. duality

@_suite(3, "graded transpose law for d on density and point currents", 10)
def duality(res, seed):
    rng = make_rng(seed)
    bad = total = 0
    for n in range(3):
        for k in range(3):
            chart = Chart(n, k, 4)
            for r in range(n + k):
                # w has degree r, eta has dual degree r + 1
                battery = monomial_battery(chart, r, 2, 3)
                for cur in (rand_density(rng, chart, r + 1, 2, 1, nterms=1),
                            rand_delta(rng, chart, r + 1, origin=False)):
                    dcur = d_density(cur) if isinstance(cur, DensityCurrent) else d_distribution(cur)
                    sign = -1 if (r + 1) % 2 else 1
                    for w in battery:
                        total += 1
                        if pair(w, dcur) != sign * pair(d(w), cur):
                            bad += 1
    res.add("<d eta, w> = (-1)^(r+1) <eta, d w> on %d pairings" % total, bad == 0,
            "%d mismatches" % bad)
    # k = 0: f dx_I  <->  (f dx) dxs_I turns the density d into exterior d
    mism = 0
    for n in range(1, 5):
        for r in range(n + 1):
            for bi in enumerate_bi(n, 0, r):
                for kind, i, new, sign in dual_d_table(n, 0, bi):
                    s, merged = merge_sign(BiIndex((i,), ()), bi)
                    if merged != new or s != sign:
                        mism += 1
    res.add("k=0: density d agrees with exterior d under f dx_I -> (f dx) dxs_I",
            mism == 0, "%d sign mismatches (n <= 4)" % mism)


# -------------------------------------------------------- 4. Kunneth

def _monomial_basis(chart, xmax, ymax):
    from .currents import _exponents
    out = []
    for r in range(chart.n + chart.k + 1):
        for bi in enumerate_bi(chart.n, chart.k, r):
            for beta in _exponents(chart.n, xmax):
                for M in _exponents(chart.k, ymax):
                    f = FormalFunction(chart.n, chart.k, chart.cap, {beta + M: 1})
                    out.append(FormalForm(chart, r, {bi: f}))
    return out


@_suite(4, "Kunneth: psi is a signed permutation chain map, boxtimes sign law", 30)
def kunneth_signs(res, seed):
    rng = make_rng(seed)
    charts = [Chart(n, k, 2) for n in range(3) for k in range(3)]
    perm_bad = chain_bad = 0
    pairs_checked = 0
    bases = {c: _monomial_basis(c, 1, 1) for c in charts}
    for c1 in charts:
        for c2 in charts:
            seen = set()
            for a in bases[c1]:
                for b in bases[c2]:
                    img = psi_pair(a, b, 4)
                    mons = list(img.monomials())
                    pairs_checked += 1
                    if len(mons) != 1 or abs(mons[0][2]) != 1:
                        perm_bad += 1
                        continue
                    key = mons[0][:2]
                    if key in seen:
                        perm_bad += 1
                    seen.add(key)
            # chain map on random tensors of mixed bidegree
            for _ in range(3):
                a = rand_form(rng, c1, None, 2, 1)
                b = rand_form(rng, c2, None, 2, 1)
                t = TensorElement.pure(a, b) if a and b else None
                if t is None:
                    continue
                if d(psi(t, 4)) != psi(d_tensor(t), 4):
                    chain_bad += 1
    res.add("psi on %d monomial pairs: signed, injective" % pairs_checked,
            perm_bad == 0, "%d failures" % perm_bad)
    res.add("d psi = psi d on random tensors over 81 chart pairs", chain_bad == 0,
            "%d failures" % chain_bad)

    # exponent of the boxtimes sign against the pairing law, every basis pair
    mism = seen_cases = 0
    cases = set()
    for c1 in charts:
        for c2 in charts:
            for r1 in range(c1.n + c1.k + 1):
                for r2 in range(c2.n + c2.k + 1):
                    for b1 in enumerate_bi(c1.n, c1.k, r1):
                        for b2 in enumerate_bi(c2.n, c2.k, r2):
                            d1 = complement(b1, c1.n, c1.k)
                            d2 = complement(b2, c2.n, c2.k)
                            e1 = DeltaCurrent.point(c1, d1)
                            e2 = DeltaCurrent.point(c2, d2)
                            w1 = FormalForm.basis(c1, b1)
                            w2 = FormalForm.basis(c2, b2)
                            lhs = pair(psi_pair(w1, w2, 4), boxtimes(e1, e2))
                            rhs = (-1) ** (r1 * r2) * pair(w1, e1) * pair(w2, e2)
                            seen_cases += 1
                            cases.add((r1, r2, c1.n - len(d1.x), c2.n - len(d2.x)))
                            if lhs != rhs or rhs == 0:
                                mism += 1
    res.add("boxtimes exponent vs pairing law: %d basis pairs, %d (r1,r2,t1,t2) classes"
            % (seen_cases, len(cases)), mism == 0, "%d mismatches" % mism)
    # the exponent formula alone, spot-checked against the density kind too
    dens_bad = 0
    small = [c for c in charts if c.n <= 1]     # keeps the product cell grids small
    for _ in range(25):
        c1 = rng.choice(small)
        c2 = rng.choice(small)
        r1 = rng.randint(0, c1.n + c1.k)
        r2 = rng.randint(0, c2.n + c2.k)
        w1 = rand_form(rng, c1, r1, 1, 1)
        w2 = rand_form(rng, c2, r2, 1, 1)
        e1 = rand_density(rng, c1, r1, 1, 1, nterms=1)
        e2 = rand_density(rng, c2, r2, 1, 1, nterms=1)
        if pair(psi_pair(w1, w2, 4), boxtimes(e1, e2)) != \
                (-1) ** (r1 * r2) * pair(w1, e1) * pair(w2, e2):
            dens_bad += 1
    res.add("pairing law for random forms and densities", dens_bad == 0,
            "%d failures" % dens_bad)


# --------------------------------------------------------- 5. forms

@_suite(5, "contractions and exactness: forms and distributions", 20)
def poincare_forms(res, seed):
    rng = make_rng(seed)
    betti_bad, cert_bad, aug_bad = [], [], []
    for n in range(3):
        for k in range(3):
            mc = forms_contraction_matrices(n, k, 4, 4)
            if not contract_forms(n, k, 4).check_augmentation():
                aug_bad.append((n, k))
            aug = mc.augmented("below")
            if any(betti(aug.complex)):
                betti_bad.append((n, k))
            rep = certify_strong_exactness(aug.complex, aug.h)
            if not rep.ok:
                cert_bad.append((n, k, rep.failing_degree, rep.identity))
            rep2 = certify_strong_exactness(mc.complex, mc.h, {0: mc.projector(0)})
            if not rep2.ok:
                cert_bad.append((n, k, "unaugmented", rep2.failing_degree))
    res.add("augmented truncated complexes, caps (4,4): all Betti numbers zero",
            not betti_bad, str(betti_bad) if betti_bad else "9 charts")
    res.add("g eps = id", not aug_bad, str(aug_bad) if aug_bad else "")
    res.add("dh+hd = id - eps g and d h d = d, exact matrices", not cert_bad,
            str(cert_bad) if cert_bad else "")
    # the operators themselves on random forms (no truncated basis involved)
    bad = 0
    for _ in range(60):
        n, k = rng.randint(0, 2), rng.randint(0, 2)
        con = contract_forms(n, k, 6)
        w = rand_form(rng, con.chart, None, 3, 3)
        if not (con.check_identity(w) and con.check_strong(w)):
            bad += 1
    res.add("contraction identities on 60 random forms", bad == 0, "%d failures" % bad)
    # transposed contraction on point currents, weakly
    bad = total = 0
    for n in range(3):
        for k in range(3):
            con = transpose_contraction(contract_forms(n, k, 6))
            for r in range(n + k + 1):
                eta = rand_delta(rng, con.chart, r, origin=bool(rng.randint(0, 1)),
                                 max_order=1, y_deg=1, nterms=2)
                total += 1
                if not con.check_identity(embed(eta)):
                    bad += 1
    res.add("transposed contraction on %d point currents (pairing battery)" % total,
            bad == 0, "%d failures" % bad)


# ------------------------------------------------------- 6. densities

@_suite(6, "contractions and exactness: densities and generalized functions", 20)
def poincare_densities(res, seed):
    rng = make_rng(seed)
    bump = default_bump()
    # one-axis mechanism
    bad = 0
    for _ in range(30):
        f = rand_pw(rng, 1)
        lhs = pw_star(f, bump).derivative()
        rhs = bump.scale(f.integral()) - f.scale(bump.integral())
        if lhs != rhs:
            bad += 1
    res.add("(f * g)' = (int f) g - (int g) f on 30 random splines", bad == 0,
            "%d failures" % bad)
    # random currents, weighted toward the cheaper charts
    plan = [((1, 0), 16), ((0, 1), 16), ((1, 1), 16), ((0, 2), 16), ((1, 2), 14),
            ((2, 0), 10), ((2, 1), 8), ((2, 2), 6)]
    bad = total = 0
    aug_bad = []
    for (n, k), count in plan:
        con = contract_density(n, k, bump, 4)
        if not con.check_augmentation():
            aug_bad.append((n, k))
        for i in range(count):
            eta = rand_density(rng, con.chart, i % (n + k + 1), 2, 1, nterms=1)
            total += 1
            if not con.check_identity(eta):
                bad += 1
    res.add("zeta alpha = id", not aug_bad, str(aug_bad) if aug_bad else "8 charts")
    res.add("dh+hd = id - alpha zeta on %d random currents" % total, bad == 0,
            "%d failures" % bad)
    # spline-window truncated complexes
    cert_bad = []
    for n in range(3):
        for k in range(3):
            if n == k == 0:
                continue
            mc = density_contraction_matrices(n, k, 3, 6, bump)
            aug = mc.augmented("above")
            rep = certify_strong_exactness(aug.complex, aug.h)
            if not rep.ok or any(betti(aug.complex)):
                cert_bad.append((n, k))
    res.add("spline-window complexes certified strongly exact", not cert_bad,
            str(cert_bad) if cert_bad else "8 charts, window [0,6], ys weight <= 3")


# ------------------------------------------------------------ 7. CLI

GOLDENS = [
    (["d", "--chart", "0,1", "y1^3"], "(3*y1^2) dy1\n"),
    (["pair", "--chart", "0,1", "--cap", "3", "y1^2", "pw-unit*(ys1^2)"], "2\n"),
    (["pair", "--chart", "2,0", "dx2", "pw-unit dxs1"], "-1\n"),
]


@_suite(7, "CLI goldens", 1)
def cli_goldens(res, seed):
    from .cli import main
    for argv, want in GOLDENS:
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(argv)
        got = buf.getvalue()
        res.add(" ".join(argv), code == 0 and got == want,
                "got %r (exit %d)" % (got, code))


SUITES = [differential_laws, wedge_oracle, duality, kunneth_signs,
          poincare_forms, poincare_densities, cli_goldens]


def run_all(seed=0, only=None, out=None):
    """Run the suites, printing one line per suite; returns the results."""
    results = []
    for suite in SUITES:
        if only and suite.number not in only:
            continue
        r = suite(seed)
        results.append(r)
        if out is not None:
            print(r.line(), file=out)
            if not r.passed:
                for line in r.details():
                    print(line, file=out)
            out.flush()
    return results
