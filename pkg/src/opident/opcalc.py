"""Hilbert-Schmidt operators on C^L and the lattice-indexed families H_lambda.

An operator is stored by its kernel ``kappa[x, y]`` so that
``(H f)(x) = sum_y kappa[x, y] f(y)``.  The other three representations are

    h[t, x]     = kappa[x, x - t]                              impulse response
    eta[t, nu]  = L**-1/2 sum_x h[t, x] exp(-2 pi i nu (x - t) / L)   spreading
    sigma[x, xi] = L**-1/2 sum_t h[t, x] exp(-2 pi i xi t / L)         KN symbol

so that ``H = L**-1/2 sum_{t, nu} eta[t, nu] T_t M_nu`` and every table has
the Frobenius norm of the kernel.
"""

from __future__ import annotations

import threading
from functools import cached_property

import numpy as np

from . import tfcore
from .errors import InvalidParams, LengthMismatch, UnknownKind

__all__ = [
    "HSOperator",
    "REPRESENTATIONS",
    "convert",
    "apply",
    "apply_spreading",
    "hs_inner",
    "shift_spreading",
    "family_member",
    "family_member_factored",
    "translation_matrix",
    "modulation_matrix",
    "make_h0",
    "H0_KINDS",
]

REPRESENTATIONS = ("kernel", "impulse", "spreading", "kn_symbol")


def _diag_index(L):
    # _diag_index(L)[t, u] = (u + t) mod L
    return (np.arange(L)[None, :] + np.arange(L)[:, None]) % L


def _kernel_to_impulse(kappa):
    L = len(kappa)
    x = np.arange(L)
    return kappa[x[None, :], (x[None, :] - x[:, None]) % L]


def _impulse_to_kernel(h):
    L = len(h)
    kappa = np.empty_like(h)
    x = np.arange(L)
    kappa[x[None, :], (x[None, :] - x[:, None]) % L] = h
    return kappa


def _kernel_to_spreading(kappa):
    L = len(kappa)
    u = np.arange(L)[None, :]
    # c[t, u] = kappa[u + t, u] = h[t, u + t]
    c = kappa[_diag_index(L), u]
    return np.fft.fft(c, axis=1, norm="ortho")


def _spreading_to_kernel(eta):
    L = len(eta)
    c = np.fft.ifft(eta, axis=1, norm="ortho")
    kappa = np.empty_like(c)
    kappa[_diag_index(L), np.arange(L)[None, :]] = c
    return kappa


def _impulse_to_symbol(h):
    return np.fft.fft(h, axis=0, norm="ortho").T


def _symbol_to_impulse(sigma):
    return np.fft.ifft(sigma.T, axis=0, norm="ortho")


class HSOperator:
    """Hilbert-Schmidt operator on C^L with lazily derived representations.

    Instances are immutable; the derived tables are computed once and cached.
    """

    def __init__(self, kernel):
        kernel = np.array(kernel, dtype=complex)
        if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
            raise ValueError(f"kernel must be square, got shape {kernel.shape}")
        kernel.setflags(write=False)
        self._kernel = kernel
        self._lock = threading.Lock()

    @classmethod
    def from_representation(cls, table, kind: str) -> "HSOperator":
        table = np.asarray(table, dtype=complex)
        if kind == "kernel":
            return cls(table)
        if kind == "impulse":
            return cls(_impulse_to_kernel(table))
        if kind == "spreading":
            return cls(_spreading_to_kernel(table))
        if kind == "kn_symbol":
            return cls(_impulse_to_kernel(_symbol_to_impulse(table)))
        raise UnknownKind(f"unknown representation {kind!r}")

    @classmethod
    def from_spreading(cls, eta) -> "HSOperator":
        return cls.from_representation(eta, "spreading")

    @property
    def L(self) -> int:
        return self._kernel.shape[0]

    @property
    def kernel(self) -> np.ndarray:
        return self._kernel

    def _frozen(self, table):
        table.setflags(write=False)
        return table

    @cached_property
    def impulse(self) -> np.ndarray:
        with self._lock:
            return self._frozen(_kernel_to_impulse(self._kernel))

    @cached_property
    def spreading(self) -> np.ndarray:
        with self._lock:
            return self._frozen(_kernel_to_spreading(self._kernel))

    @cached_property
    def kn_symbol(self) -> np.ndarray:
        h = self.impulse
        with self._lock:
            return self._frozen(_impulse_to_symbol(h))

    @property
    def hs_norm(self) -> float:
        return float(np.linalg.norm(self._kernel))

    def __call__(self, f):
        return apply(self, f)

    def __repr__(self):
        return f"HSOperator(L={self.L}, hs_norm={self.hs_norm:.6g})"


def convert(H: HSOperator, target: str) -> np.ndarray:
    if target not in REPRESENTATIONS:
        raise UnknownKind(f"unknown representation {target!r}")
    return getattr(H, target)


def apply(H: HSOperator, f) -> np.ndarray:
    f = tfcore.as_signal(f)
    if len(f) != H.L:
        raise LengthMismatch(f"operator acts on length {H.L}, got {len(f)}")
    return H.kernel @ f


def apply_spreading(eta, f) -> np.ndarray:
    """``L**-1/2 sum_{t, nu} eta[t, nu] exp(2 pi i nu (x - t) / L) f(x - t)``."""
    eta = np.asarray(eta, dtype=complex)
    f = tfcore.as_signal(f)
    L = len(f)
    if eta.shape != (L, L):
        raise LengthMismatch("spreading table and signal sizes differ")
    # for each t: sum_nu eta[t, nu] e^{2 pi i nu u / L} = sqrt(L) ifft(eta[t])(u), u = x - t
    w = np.fft.ifft(eta, axis=1, norm="ortho")
    x = np.arange(L)
    u = (x[None, :] - x[:, None]) % L
    return np.sum(w[np.arange(L)[:, None], u] * f[u], axis=0)


def hs_inner(H: HSOperator, K: HSOperator, via: str = "kernel") -> complex:
    """HS inner product ``<H, K>`` evaluated in the chosen representation."""
    return complex(np.vdot(convert(K, via), convert(H, via)))


def shift_spreading(eta, lam) -> np.ndarray:
    """Translate a spreading table by ``(s, omega)`` after modulating by ``(z, y)``.

    ``out[t, nu] = exp(2 pi i (z (t - s) + y (nu - omega)) / L) eta[t - s, nu - omega]``
    """
    eta = np.asarray(eta, dtype=complex)
    L = len(eta)
    s, omega, z, y = (int(v) % L for v in lam)
    x = np.arange(L)
    phase = np.exp(2j * np.pi * ((z * x) % L) / L)[:, None] * np.exp(2j * np.pi * ((y * x) % L) / L)[None, :]
    return np.roll(phase * eta, (s, omega), axis=(0, 1))


def family_member(H0: HSOperator, lam) -> HSOperator:
    """The operator whose spreading function is ``shift_spreading(eta_H0, lam)``."""
    return HSOperator.from_spreading(shift_spreading(H0.spreading, lam))


def translation_matrix(L: int, k: int) -> np.ndarray:
    return np.roll(np.eye(L, dtype=complex), int(k), axis=0)


def modulation_matrix(L: int, l: int) -> np.ndarray:
    x = np.arange(L)
    return np.diag(np.exp(2j * np.pi * ((int(l) * x) % L) / L))


def family_member_factored(H0: HSOperator, lam) -> HSOperator:
    """``T_s M_z T_-y H0 T_y M_(omega - z)`` built from shift matrices.

    Equal to :func:`family_member` for every ``lam = (s, omega, z, y)``.
    """
    L = H0.L
    s, omega, z, y = (int(v) for v in lam)
    left = translation_matrix(L, s) @ modulation_matrix(L, z) @ translation_matrix(L, -y)
    right = translation_matrix(L, y) @ modulation_matrix(L, omega - z)
    return HSOperator(left @ H0.kernel @ right)


def _gauss_kernel(L, width=1.0, normalize=False):
    x = tfcore.symmetric_rep(L).astype(float)
    g = np.exp(-np.pi * x**2 / (width**2 * L))
    kappa = np.outer(g, g)
    if normalize:
        kappa /= np.linalg.norm(kappa)
    return HSOperator(kappa)


def _gauss_spreading(L, width=1.0):
    x = tfcore.symmetric_rep(L).astype(float)
    g = np.exp(-np.pi * x**2 / (width**2 * L))
    eta = np.outer(g, g)
    return HSOperator.from_spreading(eta / np.linalg.norm(eta))


def _opw_box(L, a, b, normalize=False):
    if not (0 < a <= L and 0 < b <= L):
        raise InvalidParams(f"box sides must lie in (0, {L}], got ({a}, {b})")
    eta = np.zeros((L, L), dtype=complex)
    eta[:a, :b] = 1.0
    if normalize:
        eta /= np.sqrt(a * b)
    return HSOperator.from_spreading(eta)


def _prod_conv(L, rho, r):
    rho = tfcore.as_signal(rho)
    r = tfcore.as_signal(r)
    if len(rho) != L or len(r) != L:
        raise InvalidParams("rho and r must have length L")
    x = np.arange(L)
    return HSOperator(rho[:, None] * r[(x[:, None] - x[None, :]) % L])


def _rank_one(L, h, g0):
    h = tfcore.as_signal(h)
    g0 = tfcore.as_signal(g0)
    if len(h) != L or len(g0) != L:
        raise InvalidParams("h and g0 must have length L")
    return HSOperator(np.outer(g0, np.conj(h)))


H0_KINDS = {
    "gauss_kernel": _gauss_kernel,
    "gauss_spreading": _gauss_spreading,
    "opw_box": _opw_box,
    "prod_conv": _prod_conv,
    "rank_one": _rank_one,
}


def make_h0(kind: str, L: int, **params) -> HSOperator:
    """Build a named prototype operator on C^L.

    ``gauss_kernel(width=1, normalize=False)``
        kernel ``exp(-pi (x^2 + y^2) / (width^2 L))`` on symmetric representatives.
    ``gauss_spreading(width=1)``
        unit-norm spreading function ``exp(-pi (t^2 + nu^2) / (width^2 L))``;
        unlike ``gauss_kernel`` this operator has full rank.
    ``opw_box(a, b, normalize=False)``
        spreading function equal to 1 on ``[0, a) x [0, b)``.
    ``prod_conv(rho, r)``
        ``f -> rho * (f conv r)`` (cyclic convolution).
    ``rank_one(h, g0)``
        ``f -> g0 <f, h>``; its spreading function is ``L**-1/2 stft(g0, h)``.
    """
    try:
        builder = H0_KINDS[kind]
    except KeyError:
        raise UnknownKind(f"unknown operator kind {kind!r}") from None
    return builder(int(L), **params)
