"""Scenario runners: the delta-train identification, the Gaussian examples,
the non-identifiable family, and the density sweep with its CSV/JSON output.

Continuous lattice generators are mapped onto Z_L^4 by ``round(entry * sqrt(L))``;
records keep both the continuous entries and the integer generator.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import tfcore
from .errors import DegenerateDiscretization, InvalidParams, NotADivisor
from .identify import (
    GaborSystem,
    IdentificationProblem,
    analysis_matrix,
    analysis_system,
    box_points,
    discretize_generator,
    identify_report,
    lattice_points,
    response_family,
    riesz_bounds,
    riesz_ratio,
    spreading_family,
)
from .lattice import SQRT2, Lattice4, tilde_lattice, two_beurling_density
from .opcalc import HSOperator, make_h0

log = logging.getLogger(__name__)

__all__ = [
    "CSV_HEADER",
    "SweepRecord",
    "ExperimentConfig",
    "identifier_catalog",
    "evaluate_lattice",
    "thm51_problem",
    "run_thm51",
    "gaussian_lattice",
    "notident_lattice",
    "run_gaussian_example",
    "run_notident",
    "sample_generator",
    "run_density_sweep",
    "density_violations",
    "write_records",
    "records_to_csv",
]

CSV_HEADER = (
    "a1,b1,c1,d1,a2,b2,c2,d2,L,D2,Dtilde,riesz_spreading_lo,riesz_response_lo,identifier,identifiable"
).split(",")

STABILITY_RTOL = 0.10
DENSITY_SLACK = 1.05


@dataclass
class ExperimentConfig:
    scenario: str = "sweep"
    L: int = 64
    samples: int = 200
    seed: int = 7
    tol: float = 1e-6
    trunc_N: int = 4
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.tol <= 0:
            raise InvalidParams("tolerance must be positive")
        if self.L < 2:
            raise InvalidParams("L must be at least 2")


@dataclass
class SweepRecord:
    entries: tuple
    L: int
    D2: float
    Dtilde: float
    riesz_spreading_lo: float
    riesz_response_lo: float
    identifier: str
    identifiable: bool
    gen_discrete: list = field(default_factory=list)
    closes: bool = False
    n_points: int = 0
    extra: dict = field(default_factory=dict)

    def row(self) -> list:
        return [*self.entries, self.L, self.D2, self.Dtilde, self.riesz_spreading_lo,
                self.riesz_response_lo, self.identifier, self.identifiable]


def identifier_catalog(L: int) -> dict[str, np.ndarray]:
    """Unit-norm identifiers: delta trains over every divisor of L, a Gaussian,
    a chirp and three seeded random signals."""
    cat = {}
    for a in (d for d in range(1, L + 1) if L % d == 0):
        g = tfcore.make_window("delta_train", L, a=a)
        cat[f"delta_train({a})"] = g / np.linalg.norm(g)
    cat["gauss"] = tfcore.make_window("gauss", L)
    chirp = tfcore.make_window("chirp", L, c=1 if L % 2 == 0 else 2)
    cat["chirp"] = chirp / np.linalg.norm(chirp)
    for seed in range(3):
        cat[f"random_unit({seed})"] = tfcore.make_window("random_unit", L, seed=seed)
    return cat


def _select_catalog(L, catalog):
    full = identifier_catalog(L)
    if catalog is None:
        return full
    if isinstance(catalog, dict):
        return catalog
    return {name: full[name] for name in catalog}


def _density_pair(lat):
    D2 = two_beurling_density(lat)
    tl = tilde_lattice(lat)
    Dt = math.inf if tl.degenerate else 1.0 / abs(tl.det)
    return D2, Dt


def evaluate_lattice(lat: Lattice4, L: int, H0: HSOperator, catalog=None, tol: float = 1e-6,
                     N: int = 4, analysis: GaborSystem | None = None) -> SweepRecord:
    """Run every catalog identifier against ``(H0, lat)`` discretized on Z_L.

    An identifier counts when the spreading family and the identification
    matrix both have ``sigma_min / sigma_max >= tol`` and, for generators that
    do not close on Z_L^4, the response lower bound moves by less than 10%
    when the index box doubles.
    """
    gen = discretize_generator(lat, L)
    pts, closes = lattice_points(gen, L, N)
    pts2 = None if closes else box_points(gen, L, 2 * N)
    catalog = _select_catalog(L, catalog)
    analysis = analysis_system(L) if analysis is None else analysis
    rows = analysis.analysis_vectors()

    spreading = riesz_bounds(spreading_family(H0, pts))
    spreading_ok = riesz_ratio(spreading) >= tol
    per_identifier = {}
    for name, g in catalog.items():
        R = response_family(H0, pts, g)
        lo, hi = riesz_bounds(R)
        sv = np.linalg.svd(analysis_matrix(R, rows), compute_uv=False)
        ratio = float(sv[-1] / sv[0]) if sv[0] > 0 and len(pts) <= len(rows) else 0.0
        stable = True
        lo2 = None
        if pts2 is not None:
            lo2 = riesz_bounds(response_family(H0, pts2, g))[0]
            stable = lo > 0 and abs(lo2 - lo) < STABILITY_RTOL * lo
        per_identifier[name] = {
            "lo": lo, "hi": hi, "ratio_A": ratio, "lo_2N": lo2,
            "ok": bool(spreading_ok and ratio >= tol and stable),
        }

    winners = [n for n, r in per_identifier.items() if r["ok"]] or list(per_identifier)
    best = max(winners, key=lambda n: per_identifier[n]["lo"])
    D2, Dt = _density_pair(lat)
    return SweepRecord(
        entries=lat.entries,
        L=L,
        D2=D2,
        Dtilde=Dt,
        riesz_spreading_lo=spreading[0],
        riesz_response_lo=per_identifier[best]["lo"],
        identifier=best,
        identifiable=per_identifier[best]["ok"],
        gen_discrete=gen.T.tolist(),
        closes=closes,
        n_points=len(pts),
        extra={"spreading_bounds": spreading, "per_identifier": per_identifier},
    )


# ---------------------------------------------------------------------------
# delta-train identification of a box-limited spreading class


def thm51_problem(L: int, a: int) -> IdentificationProblem:
    """Identification of operators with spreading support ``[0, a) x [0, b)``.

    The prototype spreading function is the unit-norm box, the family members
    are its modulations by ``(k b, l a)``, the identifier is the delta train
    ``sqrt(a) sum_n delta_(n a)`` and the analysis basis is
    ``char_box(a)`` on ``aZ_L x bZ_L``.  Analysis index ``(-l a, k b)`` is
    paired with family member ``(k, l)`` so that the matrix is the identity.
    """
    L, a = int(L), int(a)
    if a <= 0 or L % a:
        raise NotADivisor(f"{a} does not divide L={L}")
    b = L // a
    H0 = make_h0("opw_box", L, a=a, b=b, normalize=True)
    k, l = np.meshgrid(np.arange(a), np.arange(b), indexing="ij")
    k, l = k.ravel(), l.ravel()
    zeros = np.zeros_like(k)
    points = np.stack([zeros, zeros, (k * b) % L, (l * a) % L], axis=1)
    g = math.sqrt(a) * tfcore.make_window("delta_train", L, a=a)
    analysis = GaborSystem(tfcore.make_window("char_box", L, a=a), np.stack([(-l * a) % L, (k * b) % L], axis=1))
    # continuous generator of the member lattice (discrete step / sqrt(L))
    r = math.sqrt(L)
    lat = Lattice4.from_entries(0, 0, b / r, 0, 0, 0, 0, a / r)
    return IdentificationProblem(H0, points, g, analysis, lattice=lat)


def run_thm51(L: int = 64, a: int = 8, trials: int = 4, seed: int = 0, tol: float = 1e-6):
    P = thm51_problem(L, a)
    return identify_report(P, trials=trials, seed=seed, tol=tol)


# ---------------------------------------------------------------------------
# Gaussian examples and the non-identifiable family


def gaussian_lattice(variant: int, alpha: float, beta: float) -> Lattice4:
    if variant == 1:
        return Lattice4.from_entries(alpha, 0, 0, 0, 0, beta, alpha, 0)
    if variant == 2:
        return Lattice4.from_entries(alpha, 0, 0, 0, 0, 0, alpha, beta)
    raise InvalidParams(f"variant must be 1 or 2, got {variant}")


def notident_lattice(alpha: float, beta: float) -> Lattice4:
    return Lattice4.from_entries(0, 0, 0, beta, alpha, beta, 0, 0)


def _looks_rational(x: float, max_den: int = 64, tol: float = 1e-9) -> bool:
    frac = Fraction(x).limit_denominator(max_den)
    return abs(float(frac) - x) <= tol * max(1.0, abs(x))


def _gaussian_predicates(variant, alpha, beta):
    if variant == 1:
        return {
            "region_text": bool(abs(alpha * (beta + alpha * SQRT2)) >= SQRT2
                                and abs(alpha * beta) > SQRT2 and abs(alpha) > 1),
            "region_caption": bool(abs(alpha * (beta + alpha * SQRT2)) >= SQRT2
                                   and abs(alpha * beta) > 2 and abs(alpha) > 1),
        }
    rational = _looks_rational(SQRT2 * beta / alpha)
    return {
        "region_text": bool(abs(alpha) > 1 and rational),
        "sqrt2_beta_over_alpha_rational": rational,
        "regime": "riesz" if rational else "outside Riesz regime",
    }


def run_gaussian_example(variant: int, alpha: float, beta: float, L: int, catalog=None,
                         tol: float = 1e-6, N: int = 4) -> SweepRecord:
    """Gaussian-kernel prototype on one of the two rank-2 example lattices.

    The record's ``extra`` holds the sufficient-condition predicates evaluated
    on the continuous parameters; they are reported, not asserted.
    """
    if alpha <= 0 or beta <= 0:
        raise InvalidParams("alpha and beta must be positive")
    lat = gaussian_lattice(variant, alpha, beta)
    H0 = make_h0("gauss_kernel", L, normalize=True)
    rec = evaluate_lattice(lat, L, H0, catalog, tol, N)
    rec.extra["predicates"] = _gaussian_predicates(variant, alpha, beta)
    rec.extra["scenario"] = f"gauss-variant-{variant}"
    return rec


def notident_operator(L: int, beta: float) -> HSOperator:
    """Rank-one prototype ``f -> phi <f, psi>`` with Gaussian ``phi`` and a
    Gaussian ``psi`` compressed in time by ``min(1, |beta|)``.

    The compression spreads the spreading function over about ``1/|beta|`` in
    frequency, which keeps the modulations by ``beta`` a Riesz family.
    """
    psi = tfcore.make_window("gauss", L, width=min(1.0, abs(beta)))
    phi = tfcore.make_window("gauss", L)
    return make_h0("rank_one", L, h=psi, g0=phi)


def run_notident(alpha: float, beta: float, L: int, catalog=None, tol: float = 1e-6,
                 N: int = 4) -> SweepRecord:
    """Family on the lattice with columns ``(0, 0, 0, beta)`` and ``(alpha, beta, 0, 0)``.

    For every identifier the response lower Riesz bound is reported on the
    index boxes of size N and 2N.
    """
    if not abs(alpha * beta) < 1:
        raise InvalidParams(f"needs |alpha beta| < 1, got {abs(alpha * beta)}")
    lat = notident_lattice(alpha, beta)
    gen = discretize_generator(lat, L)
    a_d, b_d = int(gen[0, 1]), int(gen[3, 0])
    if abs(a_d * b_d) >= L:
        raise InvalidParams(f"|alpha beta| < 1 is not representable on Z_{L}: {a_d} * {b_d} >= {L}")
    H0 = notident_operator(L, beta)
    rec = evaluate_lattice(lat, L, H0, catalog, tol, N)
    catalog = _select_catalog(L, catalog)
    pts2 = box_points(gen, L, 2 * N)
    pts, _ = lattice_points(gen, L, N)
    lo_N = {n: r["lo"] for n, r in rec.extra["per_identifier"].items()}
    lo_2N = {n: riesz_bounds(response_family(H0, pts2, g))[0] for n, g in catalog.items()}
    rec.extra.update(
        scenario="notident",
        response_lo_N=lo_N,
        response_lo_2N=lo_2N,
        n_points_2N=len(pts2),
        discrete_alpha_beta=(a_d, b_d),
    )
    return rec


# ---------------------------------------------------------------------------
# density sweep

_SWEEP_VALUES = np.array([0.0, 0.5, 1.0, 2.0, 4.0, -0.5, -1.0, -2.0, -4.0])
_SWEEP_WEIGHTS = np.array([0.44, 0.1, 0.1, 0.06, 0.03, 0.1, 0.1, 0.04, 0.03])


def sample_generator(rng: np.random.Generator) -> Lattice4:
    """Sparse random generator with dyadic rational entries."""
    entries = rng.choice(_SWEEP_VALUES, size=8, p=_SWEEP_WEIGHTS / _SWEEP_WEIGHTS.sum())
    return Lattice4.from_entries(*entries)


def _draw_candidates(rng, L, count):
    out = []
    for _ in range(count):
        lat = sample_generator(rng)
        if lat.rank < 2:
            continue
        try:
            discretize_generator(lat, L)
        except DegenerateDiscretization:
            continue
        out.append(lat)
    return out


def run_density_sweep(samples: int = 200, L: int = 64, seed: int = 7, tol: float = 1e-6, N: int = 4,
                      out: str | Path | None = None, fmt: str = "csv", catalog=None,
                      h0: str = "gauss_spreading", workers: int = 1) -> list[SweepRecord]:
    """Random-lattice falsification run for the density bound.

    The prototype defaults to the full-rank Gaussian spreading function; a
    rank-one prototype such as ``gauss_kernel`` makes every point pair with the
    same image in the tilde lattice linearly dependent, so far fewer lattices
    come out identifiable and the bound is probed less sharply.

    Generators of rank < 2, generators that collapse on Z_L and families whose
    spreading functions are not a Riesz sequence (ratio < tol) are skipped.
    Every kept sample is checked for the arithmetic implication
    ``D2 > sqrt(2) => |det tilde| < 1``; a failure raises AssertionError.
    Records come back in sample order whatever ``workers`` is, and are
    written to ``out`` when given.
    """
    rng = np.random.default_rng(seed)
    H0 = make_h0(h0, L, normalize=True) if h0 == "gauss_kernel" else make_h0(h0, L)
    analysis = analysis_system(L)
    records = []
    drawn = 0

    def evaluate(lat):
        return evaluate_lattice(lat, L, H0, catalog, tol, N, analysis=analysis)

    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while len(records) < samples:
            if drawn > 100 * max(samples, 1):
                raise RuntimeError("could not draw enough non-degenerate generators")
            want = max(8, 2 * (samples - len(records)))
            batch = _draw_candidates(rng, L, want)
            drawn += want
            results = pool.map(evaluate, batch) if pool else map(evaluate, batch)
            for lat, rec in zip(batch, results):
                if len(records) == samples:
                    break
                if riesz_ratio(rec.extra["spreading_bounds"]) < tol:
                    continue
                det_tilde = abs(tilde_lattice(lat).det)
                if rec.D2 > SQRT2 and not det_tilde < 1:
                    raise AssertionError(f"D2 = {rec.D2} > sqrt(2) but |det tilde| = {det_tilde}")
                rec.extra["sample"] = len(records)
                records.append(rec)
                log.debug("sample %d: D2=%.4g identifiable=%s", rec.extra["sample"], rec.D2, rec.identifiable)
    finally:
        if pool:
            pool.shutdown()
    if out is not None:
        write_records(records, out, fmt)
    return records


def density_violations(records, slack: float = DENSITY_SLACK) -> list[SweepRecord]:
    """Identifiable records whose density exceeds ``sqrt(2) * slack``."""
    return [r for r in records if r.identifiable and r.D2 > SQRT2 * slack]


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in rec.row()])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def write_records(records, path, fmt: str = "csv") -> Path:
    path = Path(path)
    if fmt == "csv":
        path.write_text(records_to_csv(records))
    elif fmt == "json":
        rows = [dict(zip(CSV_HEADER, (_json_safe(v) for v in rec.row()))) for rec in records]
        path.write_text(json.dumps(rows, indent=1) + "\n")
    else:
        raise InvalidParams(f"unknown format {fmt!r}")
    return path
