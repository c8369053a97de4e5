"""
2-Beurling density of rank-2 lattices in R^4
============================================

A family H_lambda is indexed by a lattice of rank two in R^4.  Its density
is the inverse square root of the sum of the six squared 2 x 2 minors of the
generator, and identifiable families must have density at most sqrt(2).
"""

import math

import numpy as np

from opident.lattice import (
    Lattice2,
    Lattice4,
    count_points_in_ball,
    lift_gamma,
    lift_m,
    necessary_condition_holds,
    tilde_lattice,
    two_beurling_density,
)

# a time-frequency lattice Gamma with covolume 1/2
gamma = Lattice2(np.array([[1.0, 0.0], [0.0, 0.5]]))
print("|det Gamma| =", abs(gamma.det))

# members pi(gamma) H0: density loses a factor sqrt(2) against the 2-D density
print("D2(lift_gamma) =", two_beurling_density(lift_gamma(gamma)), " (2 / sqrt(2))")
# members conjugated by pi(m): the density equals the 2-D density
print("D2(lift_m)     =", two_beurling_density(lift_m(gamma)))

# the lattice with columns (0, 0, 0, beta) and (alpha, beta, 0, 0)
alpha, beta = 2.0, 0.25
lat = Lattice4.from_entries(0, 0, 0, beta, alpha, beta, 0, 0)
D2 = two_beurling_density(lat)
print(f"D2 = {D2:.6f}, closed form {1 / (beta * math.hypot(alpha, beta)):.6f}")
print("necessary condition D2 <= sqrt(2):", necessary_condition_holds(lat))

# when D2 exceeds sqrt(2) the tilde lattice is denser than Z^2
print("|det tilde| =", abs(tilde_lattice(lat).det))

# the density is the asymptotic count of points per area of a 2-D disc
lat = Lattice4.from_entries(1, 0, 1, 0, 0, 1, 0, 1)
for R in (10, 30, 100):
    n = count_points_in_ball(lat, R)
    print(f"R = {R:3d}: {n:6d} points, n / (pi R^2) = {n / (math.pi * R * R):.4f}"
          f"  (D2 = {two_beurling_density(lat):.4f})")
