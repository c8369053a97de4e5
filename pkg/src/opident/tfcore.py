"""Time-frequency analysis on the cyclic group Z_L.

Signals are plain 1-D complex numpy arrays of length L.  A time-frequency
index ``(k, l)`` acts by

    pi(k, l) f(x) = exp(2 pi i l (x - k) / L) f(x - k),

that is translation after modulation.  Every transform here uses the unitary
``L**-1/2`` normalization.
"""

from __future__ import annotations

import numpy as np

from .errors import LengthMismatch, NotADivisor, UnknownKind

__all__ = [
    "as_signal",
    "translate",
    "modulate",
    "tf_shift",
    "dft",
    "idft",
    "stft",
    "zak",
    "izak",
    "symmetric_rep",
    "make_window",
    "WINDOW_KINDS",
    "mod_norms",
    "seq_norm_l1s",
]


def as_signal(f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1:
        raise ValueError(f"signal must be one-dimensional, got shape {f.shape}")
    return f


def _check_same_length(*signals):
    lengths = {len(s) for s in signals}
    if len(lengths) != 1:
        raise LengthMismatch(f"signal lengths differ: {sorted(lengths)}")


def translate(f, k: int) -> np.ndarray:
    """T_k f(x) = f(x - k)."""
    return np.roll(as_signal(f), int(k))


def modulate(f, l: int) -> np.ndarray:
    """M_l f(x) = exp(2 pi i l x / L) f(x)."""
    f = as_signal(f)
    L = len(f)
    x = np.arange(L)
    return np.exp(2j * np.pi * ((int(l) * x) % L) / L) * f


def tf_shift(f, lam) -> np.ndarray:
    """Apply ``pi(k, l) = T_k M_l`` to ``f``."""
    k, l = lam
    return translate(modulate(f, l), k)


def dft(f) -> np.ndarray:
    return np.fft.fft(as_signal(f), norm="ortho")


def idft(F) -> np.ndarray:
    return np.fft.ifft(as_signal(F), norm="ortho")


def stft(f, gamma) -> np.ndarray:
    """Short-time Fourier transform ``V[k, l] = <f, pi(k, l) gamma>``.

    The inner product is linear in the first slot.  Row index is the time
    shift k, column index the frequency shift l.
    """
    f = as_signal(f)
    gamma = as_signal(gamma)
    _check_same_length(f, gamma)
    L = len(f)
    idx = (np.arange(L)[:, None] + np.arange(L)[None, :]) % L
    # F[k, u] = f(u + k) conj(gamma(u)); the FFT over u supplies exp(-2 pi i l u / L)
    F = f[idx] * np.conj(gamma)[None, :]
    return np.fft.fft(F, axis=1)


def zak(f, a: int) -> np.ndarray:
    """Discrete Zak transform with time step ``a``.

    Returns the ``a x b`` table (``b = L / a``)

        Z[q, j] = b**-1/2 sum_r f(q + r a) exp(-2 pi i r j / b),

    which is a unitary map from C^L onto C^(a x b).
    """
    f = as_signal(f)
    L = len(f)
    a = int(a)
    if a <= 0 or L % a:
        raise NotADivisor(f"{a} does not divide L={L}")
    b = L // a
    return np.fft.fft(f.reshape(b, a), axis=0, norm="ortho").T


def izak(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    return np.fft.ifft(Z.T, axis=0, norm="ortho").reshape(-1)


def symmetric_rep(L: int) -> np.ndarray:
    """Representatives of Z_L in ``[-L/2, L/2)``."""
    x = np.arange(L)
    return np.where(x < (L + 1) // 2, x, x - L)


def _periodized_gauss(L, width, center=0.0):
    x = np.arange(L)[:, None] + L * np.arange(-3, 4)[None, :] - center
    return np.exp(-np.pi * x**2 / (width**2 * L)).sum(axis=1)


def _char_box(L, a):
    if a <= 0 or L % a:
        raise NotADivisor(f"{a} does not divide L={L}")
    g = np.zeros(L, dtype=complex)
    g[:a] = a**-0.5
    return g


def _delta_train(L, a):
    if a <= 0 or L % a:
        raise NotADivisor(f"{a} does not divide L={L}")
    g = np.zeros(L, dtype=complex)
    g[::a] = 1.0
    return g


def _gauss(L, width=1.0, center=0.0):
    g = _periodized_gauss(L, float(width), float(center)).astype(complex)
    return g / np.linalg.norm(g)


def _chirp(L, c=1):
    x = np.arange(L)
    # exp(pi i c x^2 / L) is L-periodic only for c L even
    return np.exp(1j * np.pi * ((c * x * x) % (2 * L)) / L)


def _random_unit(L, seed=0):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    return g / np.linalg.norm(g)


WINDOW_KINDS = {
    "char_box": _char_box,
    "delta_train": _delta_train,
    "gauss": _gauss,
    "chirp": _chirp,
    "random_unit": _random_unit,
}


def make_window(kind: str, L: int, **params) -> np.ndarray:
    """Build a named signal of length ``L``.

    ``char_box(a)``    a**-1/2 on [0, a), unit norm
    ``delta_train(a)`` ones on aZ_L (L/a ones)
    ``gauss(width, center)`` periodized exp(-pi (x - center)^2 / (width^2 L)), unit norm
    ``chirp(c)``       exp(pi i c x^2 / L)
    ``random_unit(seed)`` complex Gaussian noise, unit norm
    """
    try:
        builder = WINDOW_KINDS[kind]
    except KeyError:
        raise UnknownKind(f"unknown window kind {kind!r}") from None
    return builder(int(L), **params)


def _weight(L, s):
    z = symmetric_rep(L)
    radius = np.hypot(z[:, None], z[None, :])
    return (1.0 + radius / np.sqrt(L)) ** s


def mod_norms(f, gamma, s: float = 0.0) -> tuple[float, float]:
    """Discrete M^inf_s and M^1_s norms of ``f`` measured with window ``gamma``.

    The weight is ``(1 + |z|/sqrt(L))**s`` with ``z`` the symmetric
    representative of the time-frequency index.  Pass ``s=0`` for the plain
    M^inf and M^1 norms.
    """
    V = np.abs(stft(f, gamma))
    weighted = V * _weight(len(V), s)
    return float(weighted.max()), float(weighted.sum())


def seq_norm_l1s(coeffs, points, s: float = 0.0) -> float:
    """Weighted l^1 norm ``sum |c_j| (1 + |p_j|)**s`` over lattice points p_j."""
    coeffs = np.asarray(coeffs)
    if coeffs.size == 0:
        return 0.0
    points = np.asarray(points, dtype=float).reshape(len(coeffs), -1)
    radius = np.linalg.norm(points, axis=1)
    return float(np.sum(np.abs(coeffs) * (1.0 + radius) ** s))
