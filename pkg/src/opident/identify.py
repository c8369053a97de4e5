"""Riesz bounds, identification matrices and coefficient recovery.

Families of vectors are passed as 2-D arrays with one vector per row.  Lattice
points in Z_L^4 are integer arrays of shape ``(N, 4)`` holding
``(s, omega, z, y)`` reduced mod L.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import tfcore
from .errors import (
    DegenerateDiscretization,
    EmptyFamily,
    LengthMismatch,
    NotIdentifiable,
    ShapeMismatch,
)
from .lattice import Lattice4, numerical_rank, tilde_lattice, two_beurling_density
from .opcalc import HSOperator, shift_spreading

__all__ = [
    "GaborSystem",
    "IdentificationProblem",
    "IdentificationReport",
    "Recovery",
    "riesz_bounds",
    "riesz_ratio",
    "spreading_family",
    "response_family",
    "identification_matrix",
    "analysis_matrix",
    "recover_coefficients",
    "rank_one_response",
    "biorthogonal_dual",
    "analysis_system",
    "default_box_size",
    "discretize_generator",
    "subgroup_points",
    "box_points",
    "lattice_points",
    "synthesize_operator",
    "identify_report",
]


# ---------------------------------------------------------------------------
# Gabor systems


@dataclass(frozen=True)
class GaborSystem:
    """Window plus a finite set of time-frequency indices ``(k, l)``.

    ``dual`` optionally holds the analysis window paired with ``window``; when
    set, :meth:`analysis_vectors` uses it instead of ``window``.
    """

    window: np.ndarray
    indices: np.ndarray
    dual: np.ndarray | None = None

    def __post_init__(self):
        window = tfcore.as_signal(self.window)
        L = len(window)
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1, 2) % L
        if len({tuple(r) for r in idx}) != len(idx):
            raise ValueError("GaborSystem indices must be distinct mod L")
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "indices", idx)
        if self.dual is not None:
            dual = tfcore.as_signal(self.dual)
            if len(dual) != L:
                raise LengthMismatch("dual window length differs from window")
            object.__setattr__(self, "dual", dual)

    @property
    def L(self) -> int:
        return len(self.window)

    def vectors(self) -> np.ndarray:
        return _gabor_rows(self.window, self.indices)

    def analysis_vectors(self) -> np.ndarray:
        return _gabor_rows(self.window if self.dual is None else self.dual, self.indices)


def _gabor_rows(window, indices):
    L = len(window)
    x = np.arange(L)
    k = indices[:, 0:1]
    l = indices[:, 1:2]
    u = (x[None, :] - k) % L
    return np.exp(2j * np.pi * ((l * u) % L) / L) * window[u]


def default_box_size(L: int) -> int:
    """Divisor of L closest to sqrt(L) (the smaller one on ties)."""
    divisors = [d for d in range(1, L + 1) if L % d == 0]
    return min(divisors, key=lambda d: (abs(d - math.sqrt(L)), d))


def analysis_system(L: int, kind: str = "char_box", a: int | None = None) -> GaborSystem:
    """Orthonormal or dual-window analysis system on the lattice ``aZ_L x bZ_L``.

    ``char_box``: window ``a**-1/2 chi_[0, a)``, an orthonormal basis.
    ``gauss``: critically sampled Gaussian with its canonical dual window.
    The Gaussian is centred at x = 1/2: a centred Gaussian has a Zak-transform
    zero at the half-period point, which lies on the sampling grid whenever
    a and b are even and makes the system singular.
    """
    a = default_box_size(L) if a is None else int(a)
    b = L // a
    if a * b != L:
        raise tfcore.NotADivisor(f"{a} does not divide L={L}")
    q, p = np.meshgrid(np.arange(b), np.arange(a), indexing="ij")
    indices = np.stack([a * q.ravel(), b * p.ravel()], axis=1)
    if kind == "char_box":
        return GaborSystem(tfcore.make_window("char_box", L, a=a), indices)
    if kind == "gauss":
        window = tfcore.make_window("gauss", L, center=0.5)
        rows = _gabor_rows(window, indices % L)
        frame_op = rows.T @ rows.conj()
        dual = np.linalg.solve(frame_op, window)
        return GaborSystem(window, indices, dual=dual)
    raise tfcore.UnknownKind(f"unknown analysis kind {kind!r}")


# ---------------------------------------------------------------------------
# Riesz bounds


def riesz_bounds(vectors) -> tuple[float, float]:
    """Optimal Riesz constants ``(sigma_min^2, sigma_max^2)`` of a finite family.

    With more vectors than dimensions the family is linearly dependent and the
    lower bound is exactly 0.
    """
    V = np.asarray(vectors, dtype=complex)
    if V.size == 0 or V.ndim != 2 or V.shape[0] == 0:
        raise EmptyFamily("riesz_bounds needs at least one vector")
    n, dim = V.shape
    sv = np.linalg.svd(V, compute_uv=False)
    upper = float(sv[0] ** 2)
    lower = 0.0 if n > dim else float(sv[-1] ** 2)
    return lower, upper


def riesz_ratio(bounds) -> float:
    """``sigma_min / sigma_max`` from Riesz bounds (0 for the zero family)."""
    lower, upper = bounds
    return math.sqrt(lower / upper) if upper > 0 else 0.0


# ---------------------------------------------------------------------------
# operator families


def _points(points, L):
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 4)
    return pts % L


def spreading_family(H0: HSOperator, points) -> np.ndarray:
    """Rows are the flattened spreading functions of ``H_lambda``."""
    pts = _points(points, H0.L)
    eta = H0.spreading
    return np.stack([shift_spreading(eta, lam).ravel() for lam in pts]) if len(pts) else np.empty((0, H0.L**2))


def response_family(H0: HSOperator, points, g) -> np.ndarray:
    """Rows ``H_lambda g`` for each lattice point.

    Uses ``H_lambda = T_s M_z T_-y H0 T_y M_(omega - z)``, which is equal to the
    spreading-shift definition (see :func:`opident.opcalc.family_member_factored`).
    """
    g = tfcore.as_signal(g)
    L = H0.L
    if len(g) != L:
        raise LengthMismatch(f"identifier has length {len(g)}, operator acts on {L}")
    pts = _points(points, L)
    if len(pts) == 0:
        return np.empty((0, L), dtype=complex)
    s, omega, z, y = (pts[:, i : i + 1] for i in range(4))
    x = np.arange(L)[None, :]
    u = (x - y) % L
    # T_y M_(omega - z) g
    X = np.exp(2j * np.pi * (((omega - z) * u) % L) / L) * g[u]
    Y = X @ H0.kernel.T
    # T_s M_z T_-y Y
    w = (x - s + y) % L
    phase = np.exp(2j * np.pi * ((z * (x - s)) % L) / L)
    return phase * np.take_along_axis(Y, w, axis=1)


def rank_one_response(h, g_lam, g) -> np.ndarray:
    """``H_lambda g = g_lambda <g, h>`` for the rank-one operator ``g_lambda (x) h*``."""
    h, g_lam, g = (tfcore.as_signal(v) for v in (h, g_lam, g))
    if not len(h) == len(g_lam) == len(g):
        raise LengthMismatch("h, g_lambda and g must share a length")
    return g_lam * np.vdot(h, g)


def biorthogonal_dual(vectors) -> np.ndarray:
    """Rows ``d_j`` in the span of the family with ``<v_i, d_j> = delta_ij``."""
    V = np.asarray(vectors, dtype=complex)
    gram = V.conj() @ V.T
    return np.linalg.solve(gram.T, V)


# ---------------------------------------------------------------------------
# identification problems


@dataclass(frozen=True)
class IdentificationProblem:
    H0: HSOperator
    points: np.ndarray
    g: np.ndarray
    analysis: GaborSystem
    lattice: Lattice4 | None = None

    def __post_init__(self):
        L = self.H0.L
        g = tfcore.as_signal(self.g)
        if len(g) != L or self.analysis.L != L:
            raise LengthMismatch("operator, identifier and analysis window must share L")
        pts = _points(self.points, L)
        if len({tuple(r) for r in pts}) != len(pts):
            raise ValueError("lattice points must be distinct mod L")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "points", pts)

    @property
    def L(self) -> int:
        return self.H0.L


def analysis_matrix(responses, analysis_vectors) -> np.ndarray:
    """``A[mu, lam] = <responses[lam], analysis_vectors[mu]>``."""
    R = np.asarray(responses, dtype=complex)
    G = np.asarray(analysis_vectors, dtype=complex)
    if R.shape[-1] != G.shape[-1]:
        raise LengthMismatch("responses and analysis vectors differ in length")
    return G.conj() @ R.T


def identification_matrix(P: IdentificationProblem) -> np.ndarray:
    return analysis_matrix(response_family(P.H0, P.points, P.g), P.analysis.analysis_vectors())


@dataclass
class Recovery:
    coefficients: np.ndarray
    residual: float
    cond: float
    ratio: float


def recover_coefficients(A, v, tol: float = 1e-6) -> Recovery:
    """Least-squares solve of ``A c = v`` through the SVD of A.

    Raises NotIdentifiable when ``sigma_min / sigma_max < tol``.
    """
    A = np.asarray(A, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if A.ndim != 2 or A.shape[0] < A.shape[1] or v.shape != (A.shape[0],):
        raise ShapeMismatch(f"need a tall matrix and a matching vector, got {A.shape} and {v.shape}")
    U, sv, Vh = np.linalg.svd(A, full_matrices=False)
    ratio = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    if ratio < tol:
        raise NotIdentifiable(f"sigma_min/sigma_max = {ratio:.3g} below {tol:g}", ratio=ratio)
    c = Vh.conj().T @ ((U.conj().T @ v) / sv)
    residual = float(np.linalg.norm(A @ c - v))
    return Recovery(c, residual, 1.0 / ratio, ratio)


def synthesize_operator(H0: HSOperator, points, coeffs) -> HSOperator:
    """``sum_lam c_lam H_lam`` built on the spreading side."""
    fam = spreading_family(H0, points)
    eta = (np.asarray(coeffs) @ fam).reshape(H0.L, H0.L)
    return HSOperator.from_spreading(eta)


@dataclass
class IdentificationReport:
    L: int
    n_points: int
    spreading_bounds: tuple
    response_bounds: tuple
    cond_A: float
    ratio_A: float
    recovery_relative_error: float
    identifiable: bool
    spreading_riesz: bool
    D2: float | None = None
    Dtilde: float | None = None
    max_abs_A_minus_I: float | None = None
    runtime_s: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def riesz_spreading_lo(self):
        return self.spreading_bounds[0]

    @property
    def riesz_response_lo(self):
        return self.response_bounds[0]


def _density_figures(lat):
    if lat is None:
        return None, None
    D2 = two_beurling_density(lat) if lat.rank == 2 else math.inf
    tl = tilde_lattice(lat)
    Dt = math.inf if tl.degenerate else 1.0 / abs(tl.det)
    return D2, Dt


def identify_report(P: IdentificationProblem, trials: int = 4, seed: int = 0, tol: float = 1e-6) -> IdentificationReport:
    """Riesz data, conditioning and end-to-end recovery error for one problem.

    Recovery synthesizes ``H = sum c_lam H_lam`` for random coefficients,
    applies it to the identifier, analyses ``H g`` and solves for ``c``.
    """
    t0 = time.perf_counter()
    spreading = riesz_bounds(spreading_family(P.H0, P.points))
    responses = response_family(P.H0, P.points, P.g)
    response = riesz_bounds(responses)
    analysis = P.analysis.analysis_vectors()
    A = analysis_matrix(responses, analysis)
    sv = np.linalg.svd(A, compute_uv=False)
    n = len(P.points)
    ratio = float(sv[-1] / sv[0]) if sv[0] > 0 and A.shape[0] >= n else 0.0
    spreading_riesz = riesz_ratio(spreading) >= tol

    rng = np.random.default_rng(seed)
    errors = []
    if ratio >= tol:
        for _ in range(trials):
            c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            Hg = synthesize_operator(P.H0, P.points, c).kernel @ P.g
            v = analysis.conj() @ Hg
            c_hat = recover_coefficients(A, v, tol).coefficients
            errors.append(np.linalg.norm(c_hat - c) / np.linalg.norm(c))
    D2, Dt = _density_figures(P.lattice)
    dev = float(np.abs(A - np.eye(*A.shape)).max()) if A.shape[0] == A.shape[1] else None
    return IdentificationReport(
        L=P.L,
        n_points=n,
        spreading_bounds=spreading,
        response_bounds=response,
        cond_A=1.0 / ratio if ratio > 0 else math.inf,
        ratio_A=ratio,
        recovery_relative_error=float(np.mean(errors)) if errors else math.nan,
        identifiable=bool(spreading_riesz and ratio >= tol),
        spreading_riesz=bool(spreading_riesz),
        D2=D2,
        Dtilde=Dt,
        max_abs_A_minus_I=dev,
        runtime_s=time.perf_counter() - t0,
        extra={"analysis_bounds": riesz_bounds(analysis)},
    )


# ---------------------------------------------------------------------------
# lattices on Z_L^4


def discretize_generator(lat: Lattice4, L: int) -> np.ndarray:
    """Integer generator ``round(gen * sqrt(L))``; raises if the rank collapses."""
    gen = np.rint(lat.gen * math.sqrt(L)).astype(np.int64)
    if numerical_rank(gen) < min(2, lat.rank) or np.any(np.all(gen % L == 0, axis=0)):
        raise DegenerateDiscretization(f"generator collapses on Z_{L}: {gen.T.tolist()}")
    return gen


def _column_order(col, L):
    g = math.gcd(L, *(int(v) % L for v in col))
    return L // g


def _dedupe(pts, L):
    keys = ((pts[:, 0] * L + pts[:, 1]) * L + pts[:, 2]) * L + pts[:, 3]
    _, first = np.unique(keys, return_index=True)
    return pts[np.sort(first)]


def subgroup_points(gen, L: int) -> np.ndarray:
    """All distinct points of the subgroup of Z_L^4 generated by the columns."""
    gen = np.asarray(gen, dtype=np.int64)
    o1, o2 = _column_order(gen[:, 0], L), _column_order(gen[:, 1], L)
    m, n = np.meshgrid(np.arange(o1), np.arange(o2), indexing="ij")
    pts = (np.outer(m.ravel(), gen[:, 0]) + np.outer(n.ravel(), gen[:, 1])) % L
    return _dedupe(pts, L)


def box_points(gen, L: int, N: int) -> np.ndarray:
    """Distinct points ``gen (m, n) mod L`` for ``(m, n)`` in ``[-N, N]^2``."""
    gen = np.asarray(gen, dtype=np.int64)
    r = np.arange(-N, N + 1)
    m, n = np.meshgrid(r, r, indexing="ij")
    pts = (np.outer(m.ravel(), gen[:, 0]) + np.outer(n.ravel(), gen[:, 1])) % L
    return _dedupe(pts, L)


def lattice_points(gen, L: int, N: int = 4) -> tuple[np.ndarray, bool]:
    """Points used to represent ``gen Z^2`` on Z_L^4.

    A generator *closes* when the subgroup it generates has at most L points;
    then every point is used.  Otherwise the index box ``[-N, N]^2`` is used.
    Returns ``(points, closes)``.
    """
    gen = np.asarray(gen, dtype=np.int64)
    o1, o2 = _column_order(gen[:, 0], L), _column_order(gen[:, 1], L)
    if o1 * o2 <= L * L:
        pts = subgroup_points(gen, L)
        if len(pts) <= L:
            return pts, True
    return box_points(gen, L, N), False
