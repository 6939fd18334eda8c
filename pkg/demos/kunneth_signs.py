"""Sign bookkeeping for products of charts.

Forms on two charts combine by pulling back and wedging (psi); currents
combine by an exterior product (boxtimes).  The two are tied together by
the pairing law

    <psi(w1, w2), e1 x e2> = (-1)^(r1 r2) <w1, e1> <w2, e2>

which this script checks on a few examples, along with the chain rule
for boxtimes.
"""

from formal_derham.currents import d_density, pair
from formal_derham.forms import Chart
from formal_derham.kunneth import boxtimes, product_chart, psi_pair
from formal_derham.textio import format_any, parse_current, parse_form

c1, c2 = Chart(0, 1, 3), Chart(1, 0, 3)
print("Charts (0,1) and (1,0); the product is", tuple(product_chart(c1, c2))[:2])

dy, dx = parse_form("dy1", c1), parse_form("dx1", c2)
print("psi(dy1, dx1) =", format_any(psi_pair(dy, dx)), " (dy moves past dx)")

w1 = parse_form("(y1) dy1", c1)
w2 = parse_form("(x1)", c2)
e1 = parse_current("pw-unit*(ys1^1) dnil", c1)
e2 = parse_current("pw[(0,1,2); x; 2 - x]", c2)
lhs = pair(psi_pair(w1, w2), boxtimes(e1, e2))
rhs = pair(w1, e1) * pair(w2, e2)
print("\npairing law, r1 = 1, r2 = 0")
print("  <psi(w1,w2), e1 x e2> =", lhs)
print("  <w1,e1> <w2,e2>       =", rhs)

print("\nchain rule: d(e1 x e2) = d e1 x e2 + (-1)^r1 e1 x d e2")
c3 = Chart(1, 1, 3)
f1 = parse_current("pw-unit*(ys1) dxs1", c3)     # dual degree 1
f2 = parse_current("pw-unit dnil", c2)           # dual degree 1
left = d_density(boxtimes(f1, f2))
right = boxtimes(d_density(f1), f2) - boxtimes(f1, d_density(f2))
print("  r1 =", f1.r, " holds:", left == right)
