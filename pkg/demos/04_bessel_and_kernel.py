"""
Bessel functions with error bounds
==================================

J0, J1, J2 come from a double-double power series below x = 16 and from
the Hankel expansion above it; every value carries an error bound.  The
kernel T(z; a) is a difference quotient of (1+z) J2(a sqrt(1+z)).
"""

import math

import numpy as np

from idealcount import bessel_integral_1, bessel_j, krasikov_gap, t_bound_scan, t_kernel
from idealcount.special_functions import quad_bessel_moment

for x in (0.5, 16.0, 16.5, 1e3, 1e6):
    ev = bessel_j(2, x)
    print(f"J2({x:g}) = {ev.value:+.16f}  +- {ev.abs_error_bound:.1e}")

# int_0^X t J0(a sqrt t) dt in closed form, against quadrature
a, X = 4 * math.pi, 10.0
print("closed form", bessel_integral_1(a, X), " quadrature", quad_bessel_moment(1, a, X))
print("with +J2 instead of -J2:", bessel_integral_1(a, X, published=True))

x = np.linspace(0.01, 100, 10000)
g = krasikov_gap(2, x)
print("smallest Krasikov slack for nu=2:", g.asymptotic.min(), g.envelope.min())

print("T(1/3; 4 pi) =", t_kernel(1 / 3, 4 * math.pi))
for regime in ("standard", "large"):
    rep = t_bound_scan(regime)
    print(f"{regime}: {rep.nodes} nodes, worst slack {rep.worst_slack:.4f} at z, a = {rep.worst_node}")
