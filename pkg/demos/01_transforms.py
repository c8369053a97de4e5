"""
Time-frequency shifts, STFT and Zak transform on Z_L
====================================================

Everything lives on the cyclic group Z_L, and every transform is unitary.
"""

import numpy as np

from opident import tfcore

L = 64
f = tfcore.make_window("random_unit", L, seed=0)
g = tfcore.make_window("gauss", L)

# pi(k, l) = T_k M_l moves a signal in time by k and in frequency by l
shifted = tfcore.tf_shift(g, (10, 5))
print("peak of |pi(10, 5) g| at x =", np.argmax(np.abs(shifted)))
print("peak of |DFT pi(10, 5) g| at xi =", np.argmax(np.abs(tfcore.dft(shifted))))

# the STFT table holds L^2 inner products, and its energy is L |f|^2 |g|^2
V = tfcore.stft(f, g)
print("STFT energy / (L |f|^2 |g|^2) =", np.sum(np.abs(V) ** 2) / L)

# the Zak transform reshapes the signal into an a x b table without losing energy
Z = tfcore.zak(f, 8)
print("Zak table shape:", Z.shape, " norm:", np.linalg.norm(Z))
print("inverse Zak error:", np.abs(tfcore.izak(Z) - f).max())

# the Zak transform of a centred Gaussian vanishes at the half-period point, which
# is why a critically sampled Gaussian Gabor system is singular
Zg = tfcore.zak(g, 8)
print("|Zak g| at (4, 4):", abs(Zg[4, 4]), " min over table:", np.abs(Zg).min())

# discrete modulation-space norms of the Gaussian, measured with itself
mx, total = tfcore.mod_norms(g, g, s=2)
print(f"M^inf_2 norm {mx:.3f}, M^1_2 norm {total:.3f}")
