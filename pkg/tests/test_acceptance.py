"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``
for a plain pass/fail listing.
"""

import csv
import json
import math
import time

import numpy as np

from opident import identify as idf, opcalc, tfcore
from opident.cli import main
from opident.lattice import (
    SQRT2,
    Lattice2,
    Lattice4,
    count_points_in_ball,
    lift_gamma,
    lift_m,
    tilde_lattice,
    two_beurling_density,
)


def _cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_1_delta_train_identity(capsys):
    t0 = time.perf_counter()
    code, out = _cli(capsys, "thm51", "--L", "64", "--a", "8")
    elapsed = time.perf_counter() - t0
    data = json.loads(out)
    assert code == 0
    assert data["max_abs_A_minus_I"] < 1e-10
    assert data["recovery_relative_error"] < 1e-10
    assert elapsed < 5


def test_criterion_2_family_factorization():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(100):
        L = (16, 64)[i % 2]
        H0 = opcalc.HSOperator(rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L)))
        lam = rng.integers(-3 * L, 3 * L, size=4)
        a = opcalc.family_member(H0, lam).kernel
        b = opcalc.family_member_factored(H0, lam).kernel
        worst = max(worst, np.abs(a - b).max())
    assert worst < 1e-10
    assert time.perf_counter() - t0 < 10


def test_criterion_3_representation_norms():
    rng = np.random.default_rng(3)
    for _ in range(50):
        L = int(rng.integers(2, 65))
        H = opcalc.HSOperator(rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L)))
        n = np.linalg.norm(H.kernel)
        for rep in opcalc.REPRESENTATIONS:
            table = opcalc.convert(H, rep)
            assert abs(np.linalg.norm(table) - n) < 1e-12 * n
            back = opcalc.HSOperator.from_representation(table, rep).kernel
            assert np.abs(back - H.kernel).max() < 1e-12


def test_criterion_4_density_formula():
    rng = np.random.default_rng(4)
    # (i) minors formula against det(M^T M)**-1/2
    for _ in range(10_000):
        lat = Lattice4(rng.standard_normal((4, 2)))
        ref = np.linalg.det(lat.gen.T @ lat.gen) ** -0.5
        assert abs(two_beurling_density(lat) - ref) < 1e-12 * ref
    # (ii) lifts and the non-identifiable example
    for _ in range(100):
        gamma = Lattice2(rng.uniform(-3, 3, size=(2, 2)))
        D = 1 / abs(gamma.det)
        assert abs(two_beurling_density(lift_m(gamma)) - D) < 1e-12 * D
        assert abs(two_beurling_density(lift_gamma(gamma)) - D / SQRT2) < 1e-12 * D
        alpha, beta = rng.uniform(0.1, 3, size=2) * rng.choice([-1, 1], size=2)
        ref = 1 / (abs(beta) * math.sqrt(alpha**2 + beta**2))
        lat = Lattice4.from_entries(0, 0, 0, beta, alpha, beta, 0, 0)
        assert abs(two_beurling_density(lat) - ref) < 1e-12 * ref
    # (iii) counting estimator at R = 100
    R = 100.0
    gens = [
        [[1, 0], [0, 1], [0, 0], [0, 0]],
        [[1, 0], [0, 1], [1, 0], [0, 1]],
        [[1, 1], [0, 1], [1, 0], [0, 0]],
        [[2, 0], [1, 1], [0, 1], [0, 1]],
        [[1, 0], [0, 0], [0, 1], [1, 1]],
    ]
    for gen in gens:
        lat = Lattice4(np.array(gen, dtype=float))
        est = count_points_in_ball(lat, R) / (math.pi * R * R)
        assert abs(est / two_beurling_density(lat) - 1) < 0.05


def test_criterion_5_dense_implies_small_tilde_det():
    rng = np.random.default_rng(5)
    counterexamples = 0
    dense = 0
    values = np.array([0, 0.25, 0.5, 1, 2, -0.25, -0.5, -1, -2])
    for i in range(10_000):
        if i % 2:
            gen = rng.choice(values, size=(4, 2))
        else:
            gen = rng.standard_normal((4, 2)) * rng.uniform(0.05, 2)
        lat = Lattice4(gen)
        if lat.rank < 2:
            continue
        if two_beurling_density(lat) > SQRT2:
            dense += 1
            counterexamples += not abs(tilde_lattice(lat).det) < 1
    assert dense > 1000
    assert counterexamples == 0


def test_criterion_6_sweep(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    t0 = time.perf_counter()
    code, out = _cli(capsys, "sweep", "--samples", "200", "--L", "64", "--seed", "7", "--out", str(out_path))
    elapsed = time.perf_counter() - t0
    rows = list(csv.DictReader(out_path.open()))
    assert code == 0
    assert len(rows) == 200
    bad = [r for r in rows if r["identifiable"] == "True" and float(r["D2"]) > SQRT2 * 1.05]
    assert bad == []
    assert elapsed < 600


def test_criterion_7_notident(capsys):
    code, out = _cli(capsys, "notident", "--alpha", "2", "--beta", "0.25", "--L", "128")
    data = json.loads(out)
    assert code == 0
    assert data["riesz_spreading_lo"] >= 1e-3
    lo_N, lo_2N = data["response_lo_N"], data["response_lo_2N"]
    assert len(lo_N) > 0
    assert all(v < 1e-6 for v in lo_N.values())
    assert all(lo_2N[k] < lo_N[k] for k in lo_N)


def test_criterion_8_rank_one():
    rng = np.random.default_rng(8)
    for _ in range(50):
        L = int(rng.integers(4, 65))
        h, g_lam, g = (rng.standard_normal(L) + 1j * rng.standard_normal(L) for _ in range(3))
        H = opcalc.make_h0("rank_one", L, h=h, g0=g_lam)
        ref = opcalc.apply(H, g)
        assert np.abs(idf.rank_one_response(h, g_lam, g) - ref).max() < 1e-10 * max(1, np.abs(ref).max())
    # members g_lam (x) h* with g_lam running through a Gabor system; biorthogonal analysis
    L = 32
    h = tfcore.make_window("random_unit", L, seed=1)
    g = tfcore.make_window("random_unit", L, seed=2)
    window = tfcore.make_window("gauss", L)
    system = idf.GaborSystem(window, [(4 * k, 8 * l) for k in range(8) for l in range(3)])
    G = system.vectors()
    R = np.stack([idf.rank_one_response(h, g_lam, g) for g_lam in G])
    A = idf.analysis_matrix(R, idf.biorthogonal_dual(G))
    off = A - np.diag(np.diag(A))
    assert np.sum(np.abs(off)) < 1e-10
    assert np.allclose(np.diag(A), np.vdot(h, g))


def test_criterion_9_transforms():
    rng = np.random.default_rng(9)
    for L in (16, 64, 256):
        F = np.fft.fft(np.eye(L), norm="ortho")
        assert np.abs(np.stack([tfcore.dft(e) for e in np.eye(L)]) - F).max() < 1e-12
        assert np.abs(F.conj().T @ F - np.eye(L)).max() < 1e-12
        for a in (d for d in (1, 2, 4, 8, 16) if L % d == 0):
            Zm = np.stack([tfcore.zak(e, a).ravel() for e in np.eye(L)]).T
            assert np.abs(Zm.conj().T @ Zm - np.eye(L)).max() < 1e-12
        for _ in range(5):
            f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
            g = rng.standard_normal(L) + 1j * rng.standard_normal(L)
            nf = np.linalg.norm(f)
            assert abs(np.linalg.norm(tfcore.dft(f)) - nf) < 1e-12 * nf
            assert abs(np.linalg.norm(tfcore.zak(f, 4)) - nf) < 1e-12 * nf
            energy = np.sum(np.abs(tfcore.stft(f, g)) ** 2)
            ref = L * nf**2 * np.linalg.norm(g) ** 2
            assert abs(energy - ref) < 1e-12 * ref


if __name__ == "__main__":
    import inspect
    import pathlib
    import sys
    import tempfile

    class _Capsys:
        def readouterr(self):
            out = sys.stdout.getvalue()
            sys.stdout.seek(0)
            sys.stdout.truncate()
            return type("R", (), {"out": out, "err": ""})()

    import io

    results = []
    for name, fn in sorted(inspect.getmembers(sys.modules[__name__], inspect.isfunction)):
        if not name.startswith("test_criterion_"):
            continue
        kwargs = {}
        params = inspect.signature(fn).parameters
        real_stdout = sys.stdout
        sys.stdout = io.StringIO()
        try:
            with tempfile.TemporaryDirectory() as tmp:
                if "tmp_path" in params:
                    kwargs["tmp_path"] = pathlib.Path(tmp)
                if "capsys" in params:
                    kwargs["capsys"] = _Capsys()
                fn(**kwargs)
            status = "PASS"
        except AssertionError:
            status = "FAIL"
        finally:
            sys.stdout = real_stdout
        print(f"{name}: {status}")
        results.append(status)
    sys.exit(0 if all(s == "PASS" for s in results) else 1)
