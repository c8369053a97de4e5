"""
A family that no identifier can resolve
=======================================

On the lattice with columns (0, 0, 0, beta) and (alpha, beta, 0, 0) with
|alpha beta| < 1 the spreading functions form a Riesz sequence, yet every
response family H_lambda g collapses.
"""

from opident import experiments as ex

rec = ex.run_notident(2, 0.25, 128)
print("discretized (alpha, beta):", rec.extra["discrete_alpha_beta"])
print("D2 =", rec.D2)
print("spreading family lower Riesz bound:", rec.riesz_spreading_lo)
print(f"{'identifier':18s} {'lo (N=4)':>12s} {'lo (N=8)':>12s}")
for name, lo in rec.extra["response_lo_N"].items():
    print(f"{name:18s} {lo:12.3e} {rec.extra['response_lo_2N'][name]:12.3e}")
print("points at N=4:", rec.n_points, " at N=8:", rec.extra["n_points_2N"], "(more than L, so exactly 0)")
