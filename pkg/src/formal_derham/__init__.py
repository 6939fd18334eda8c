"""Exact de Rham complexes on formal charts (R^n)^(k).

Forms with truncated formal-power-series coefficients, compactly supported
densities and point distributions as currents, their pairings, product-chart
maps, and explicit contracting homotopies, all over the rationals.
"""

from .coeffs import DensityCoeff, FormalFunction, Poly, PwPoly
from .currents import (DeltaCurrent, DensityCurrent, Functional,
                       RepresentationOverflow, d_current, pair)
from .forms import Chart, ChartMorphism, FormalForm, d, pullback, wedge
from .indexcalc import BiIndex
from .textio import format_any, parse_current, parse_form

__version__ = "0.1.0"

__all__ = [
    "BiIndex", "Chart", "ChartMorphism", "DeltaCurrent", "DensityCoeff",
    "DensityCurrent", "FormalForm", "FormalFunction", "Functional", "Poly",
    "PwPoly", "RepresentationOverflow", "d", "d_current", "format_any", "pair",
    "parse_current", "parse_form", "pullback", "wedge",
]
