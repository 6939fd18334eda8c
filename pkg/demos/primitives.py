"""Finding primitives of closed forms and currents on a formal chart.

A chart here is R^n with k formal variables y1..yk (power series cut at
a y-degree cap).  Each complex comes with an explicit contraction h, so a
closed element w has the primitive h(w), and d h(w) = w can be checked
exactly.
"""

from formal_derham.currents import d_density, d_distribution
from formal_derham.forms import Chart, d
from formal_derham.homotopy import (contract_density, contract_distributions,
                                    contract_forms)
from formal_derham.textio import format_any, parse_current, parse_form


def show(label, obj):
    print("  %-10s %s" % (label, format_any(obj)))


print("1. A closed 1-form on the (1,1) chart")
con = contract_forms(1, 1, 6)
w = parse_form("(2*x1*y1^2) dx1 + (2*x1^2*y1 + 3*y1^2) dy1", con.chart)
show("w", w)
show("dw", d(w))
prim = con.h(w)
show("h(w)", prim)
show("d h(w)", d(prim))
print("  d h(w) == w:", d(prim) == w)

print("\n2. The area form on R^2 and its radial primitive")
con = contract_forms(2, 0, 4)
area = parse_form("dx1^dx2", con.chart)
show("h(area)", con.h(area))
print("  d h(area) == area:", d(con.h(area)) == area)

print("\n3. A compactly supported density on R: the primitive only exists")
print("   after subtracting (integral) * bump, the augmentation term")
con = contract_density(1, 0)
eta = parse_current("pw[(0,1,2); x; 2 - x]", con.chart)
show("eta", eta)
lam = con.project(eta)
print("  integral  %s" % lam)
h_eta = con.h(eta)
show("h(eta)", h_eta)
residual = eta - con.include(lam)
print("  d h(eta) == eta - integral*bump:", d_density(h_eta) == residual)

print("\n4. A point current at the origin stays a point current")
con = contract_distributions(1, 1, 4)
delta = parse_current("delta(a=0; dx=1; ys1) dxs1", con.chart)
show("delta", delta)
h_delta = con.h(delta)
show("h(delta)", h_delta)
print("  homotopy identity holds:", con.check_identity(delta))
show("d(delta)", d_distribution(delta))
