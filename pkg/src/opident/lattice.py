"""Density calculus for rank-2 lattices in R^4 and full-rank lattices in R^2.

A lattice in R^4 is stored through a 4 x 2 generator ``gen`` whose columns
span it.  Rows are the coordinates ``(a, b, c, d)``, which for a point
``lambda = (s, omega, z, y)`` are the time shift, frequency shift, and the
two modulation parameters of the spreading-function shift.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateLattice

__all__ = [
    "Lattice2",
    "Lattice4",
    "RANK_RTOL",
    "SQRT2",
    "numerical_rank",
    "two_beurling_density",
    "beurling_density_2d",
    "lift_gamma",
    "lift_m",
    "tilde_lattice",
    "necessary_condition_holds",
    "count_points_in_ball",
]

RANK_RTOL = 1e-10
SQRT2 = math.sqrt(2.0)

_GAMMA_LIFT = np.array([[1, 0], [0, 1], [0, 1], [0, 0]], dtype=float)
_M_LIFT = np.array([[0, 0], [0, 0], [1, 0], [0, 1]], dtype=float)


def numerical_rank(gen) -> int:
    sv = np.linalg.svd(np.asarray(gen, dtype=float), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv >= RANK_RTOL * sv[0]))


@dataclass(frozen=True)
class Lattice4:
    """Lattice ``gen @ Z^2`` in R^4."""

    gen: np.ndarray

    def __post_init__(self):
        gen = np.array(self.gen, dtype=float)
        if gen.shape != (4, 2):
            raise ValueError(f"Lattice4 generator must be 4x2, got {gen.shape}")
        gen.setflags(write=False)
        object.__setattr__(self, "gen", gen)

    @classmethod
    def from_entries(cls, a1, b1, c1, d1, a2, b2, c2, d2):
        return cls(np.array([[a1, a2], [b1, b2], [c1, c2], [d1, d2]], dtype=float))

    @property
    def entries(self) -> tuple:
        """``(a1, b1, c1, d1, a2, b2, c2, d2)``."""
        return tuple(float(v) for v in self.gen.T.reshape(-1))

    @property
    def rank(self) -> int:
        return numerical_rank(self.gen)

    def point(self, m: int, n: int) -> np.ndarray:
        return self.gen @ np.array([m, n], dtype=float)

    def minors(self) -> np.ndarray:
        """The six 2x2 minors, ordered ab, ac, ad, bc, bd, cd."""
        g = self.gen
        return np.array(
            [g[i, 0] * g[j, 1] - g[j, 0] * g[i, 1] for i, j in itertools.combinations(range(4), 2)]
        )


@dataclass(frozen=True)
class Lattice2:
    """Lattice ``gen @ Z^2`` in R^2; columns of ``gen`` are the generators."""

    gen: np.ndarray

    def __post_init__(self):
        gen = np.array(self.gen, dtype=float)
        if gen.shape != (2, 2):
            raise ValueError(f"Lattice2 generator must be 2x2, got {gen.shape}")
        gen.setflags(write=False)
        object.__setattr__(self, "gen", gen)

    @property
    def det(self) -> float:
        g = self.gen
        return float(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])

    @property
    def degenerate(self) -> bool:
        return numerical_rank(self.gen) < 2


def two_beurling_density(lat: Lattice4) -> float:
    """2-Beurling density of a rank-2 lattice in R^4.

    Equals ``(sum of squared 2x2 minors of gen)**-1/2``.
    """
    if lat.rank < 2:
        raise DegenerateLattice("2-Beurling density needs a rank-2 generator")
    return float(1.0 / np.sqrt(np.sum(lat.minors() ** 2)))


def beurling_density_2d(gamma: Lattice2) -> float:
    if gamma.degenerate:
        raise DegenerateLattice("singular generator; density is infinite")
    return 1.0 / abs(gamma.det)


def lift_gamma(gamma: Lattice2) -> Lattice4:
    """Embed a TF lattice so that its members act as ``pi(gamma) H0``.

    A column ``(a, b)`` becomes ``(a, b, b, 0)``.
    """
    return Lattice4(_GAMMA_LIFT @ gamma.gen)


def lift_m(m: Lattice2) -> Lattice4:
    """Embed a TF lattice so that its members act by conjugation of H0.

    A column ``(a, b)`` becomes ``(0, 0, a, b)``.
    """
    return Lattice4(_M_LIFT @ m.gen)


def tilde_lattice(lat: Lattice4) -> Lattice2:
    """Time-frequency lattice around which the responses ``H_lambda g`` sit.

    Rows are ``(a1 - d1, a2 - d2)`` and ``(c1, c2)``.
    """
    a1, b1, c1, d1, a2, b2, c2, d2 = lat.entries
    return Lattice2(np.array([[a1 - d1, a2 - d2], [c1, c2]]))


def necessary_condition_holds(lat: Lattice4) -> bool:
    """True iff the 2-Beurling density is at most sqrt(2) (inclusive)."""
    return two_beurling_density(lat) <= SQRT2


def _rank_one_direction(gen):
    """Write a rank-1 generator as ``u * (alpha m + beta n)``.

    Returns ``(u, alpha, beta)`` with unit ``u``.
    """
    col = np.argmax(np.linalg.norm(gen, axis=0))
    u = gen[:, col] / np.linalg.norm(gen[:, col])
    alpha, beta = u @ gen
    return u, float(alpha), float(beta)


def count_points_in_ball(lat: Lattice4, R: float, z=None, chunk: int = 1 << 20) -> int:
    """Number of distinct lattice points strictly inside ``B_4(R) + z``.

    The index range is bounded through the smallest singular value of the
    generator: ``|gen (m, n)| >= sigma_min |(m, n)|``.  Rank-1 generators are
    handled when the two columns are commensurate; incommensurate rank-1
    generators give a dense point set and raise.
    """
    R = float(R)
    if R <= 0:
        raise ValueError("radius must be positive")
    z = np.zeros(4) if z is None else np.asarray(z, dtype=float)
    gen = lat.gen
    rank = lat.rank
    if rank == 0:
        raise DegenerateLattice("rank-0 generator")
    if rank == 1:
        return _count_rank_one(gen, R, z)

    sigma_min = np.linalg.svd(gen, compute_uv=False)[-1]
    # |(m, n) - c| <= |gen (m, n) - gen c| <= |gen (m, n) - z| < R, with gen c
    # the projection of z onto the lattice plane
    bound = int(math.ceil(R / sigma_min)) + 1
    centre = np.linalg.lstsq(gen, z, rcond=None)[0]
    m0, n0 = (int(round(c)) for c in centre)
    ms = np.arange(m0 - bound, m0 + bound + 1)
    ns = np.arange(n0 - bound, n0 + bound + 1)
    count = 0
    rows = max(1, chunk // len(ns))
    for start in range(0, len(ms), rows):
        mm, nn = np.meshgrid(ms[start : start + rows], ns, indexing="ij")
        pts = gen[:, 0, None] * mm.ravel() + gen[:, 1, None] * nn.ravel()
        inside = np.sum((pts - z[:, None]) ** 2, axis=0) < R * R
        count += int(inside.sum())
    return count


def _count_rank_one(gen, R, z):
    u, alpha, beta = _rank_one_direction(gen)
    ratio = Fraction(beta / alpha).limit_denominator(10**6) if alpha != 0 else None
    if alpha == 0 or abs(float(ratio) - beta / alpha) > 1e-12 * max(1.0, abs(beta / alpha)):
        if beta == 0 or alpha == 0:
            step = abs(alpha) or abs(beta)
        else:
            raise DegenerateLattice("rank-1 generator with incommensurate columns is dense")
    else:
        # alpha m + beta n = (alpha / q) (q m + p n) ranges over (alpha / q) Z
        step = abs(alpha) / ratio.denominator
    # points t * step * u, t in Z; |t step u - z|^2 < R^2
    proj = float(u @ z)
    perp2 = float(z @ z) - proj**2
    if perp2 >= R * R:
        return 0
    half = math.sqrt(R * R - perp2)
    lo = math.floor((proj - half) / step)
    hi = math.ceil((proj + half) / step)
    t = np.arange(lo, hi + 1)
    d2 = (t * step - proj) ** 2 + perp2
    return int(np.sum(d2 < R * R))
