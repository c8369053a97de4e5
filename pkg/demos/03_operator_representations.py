"""
Four views of one Hilbert-Schmidt operator
==========================================

Kernel, impulse response, spreading function and Kohn-Nirenberg symbol are
unitary re-arrangements of each other.
"""

import numpy as np

from opident import opcalc, tfcore

L = 32
H = opcalc.make_h0("gauss_kernel", L)

for rep in opcalc.REPRESENTATIONS:
    print(f"|{rep:9s}| = {np.linalg.norm(opcalc.convert(H, rep)):.12f}")

# the spreading function says how far H moves energy in time and frequency
eta = np.abs(H.spreading)
print("spreading function peak at", tuple(int(i) for i in np.unravel_index(np.argmax(eta), eta.shape)))

# applying H through its spreading function agrees with the kernel
f = tfcore.make_window("random_unit", L, seed=1)
print("kernel vs spreading application:", np.abs(H(f) - opcalc.apply_spreading(H.spreading, f)).max())

# family members H_lambda shift the spreading function by (s, omega) and
# modulate it by (z, y); the same operator is T_s M_z T_-y H0 T_y M_(omega - z)
lam = (5, 3, 2, 7)
a = opcalc.family_member(H, lam).kernel
b = opcalc.family_member_factored(H, lam).kernel
print("spreading-side vs factored H_lambda:", np.abs(a - b).max())

# a rank-one operator f -> g0 <f, h> has the STFT of g0 as spreading function
h, g0 = tfcore.make_window("gauss", L, width=0.5), tfcore.make_window("gauss", L)
R1 = opcalc.make_h0("rank_one", L, h=h, g0=g0)
print("rank-one spreading vs STFT / sqrt(L):", np.abs(R1.spreading - tfcore.stft(g0, h) / np.sqrt(L)).max())
