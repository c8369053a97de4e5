import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opident import opcalc, tfcore
from opident.errors import InvalidParams, LengthMismatch, UnknownKind
from opident.opcalc import HSOperator


def rand_op(L, seed):
    rng = np.random.default_rng(seed)
    return HSOperator(rng.standard_normal((L, L)) + 1j * rng.standard_normal((L, L)))


def naive_spreading(kappa):
    L = len(kappa)
    eta = np.zeros((L, L), dtype=complex)
    for t in range(L):
        for nu in range(L):
            eta[t, nu] = sum(kappa[x, (x - t) % L] * np.exp(-2j * np.pi * nu * (x - t) / L) for x in range(L))
    return eta / np.sqrt(L)


def naive_symbol(kappa):
    L = len(kappa)
    sigma = np.zeros((L, L), dtype=complex)
    for x in range(L):
        for xi in range(L):
            sigma[x, xi] = sum(kappa[x, (x - t) % L] * np.exp(-2j * np.pi * xi * t / L) for t in range(L))
    return sigma / np.sqrt(L)


def tm_matrix(L, t, nu):
    return opcalc.translation_matrix(L, t) @ opcalc.modulation_matrix(L, nu)


def test_representations_match_definitions():
    L = 7
    H = rand_op(L, 0)
    k = H.kernel
    h = np.array([[k[x, (x - t) % L] for x in range(L)] for t in range(L)])
    np.testing.assert_allclose(H.impulse, h, atol=1e-12)
    np.testing.assert_allclose(H.spreading, naive_spreading(k), atol=1e-12)
    np.testing.assert_allclose(H.kn_symbol, naive_symbol(k), atol=1e-12)


def test_spreading_expansion_rebuilds_kernel():
    # H = L**-1/2 sum eta[t, nu] T_t M_nu
    L = 6
    H = rand_op(L, 1)
    eta = H.spreading
    K = sum(eta[t, nu] * tm_matrix(L, t, nu) for t in range(L) for nu in range(L)) / np.sqrt(L)
    np.testing.assert_allclose(K, H.kernel, atol=1e-12)


def test_kn_symbol_acts_through_fourier():
    L = 8
    H = rand_op(L, 2)
    f = np.random.default_rng(3).standard_normal(L) + 0j
    fhat = tfcore.dft(f)
    x = np.arange(L)
    out = (H.kn_symbol * np.exp(2j * np.pi * np.outer(x, x) / L)) @ fhat
    np.testing.assert_allclose(out, H(f), atol=1e-12)


def test_apply_spreading_oracle():
    L = 9
    H = rand_op(L, 4)
    f = np.random.default_rng(5).standard_normal(L) + 1j
    np.testing.assert_allclose(opcalc.apply_spreading(H.spreading, f), opcalc.apply(H, f), atol=1e-12)
    with pytest.raises(LengthMismatch):
        opcalc.apply_spreading(H.spreading, np.ones(L + 1))
    with pytest.raises(LengthMismatch):
        opcalc.apply(H, np.ones(L + 1))


@settings(max_examples=40, deadline=None)
@given(L=st.integers(2, 24), seed=st.integers(0, 2**31))
def test_norms_and_round_trips(L, seed):
    H = rand_op(L, seed)
    n = H.hs_norm
    for rep in opcalc.REPRESENTATIONS:
        table = opcalc.convert(H, rep)
        assert math.isclose(np.linalg.norm(table), n, rel_tol=1e-12)
        back = HSOperator.from_representation(table, rep)
        np.testing.assert_allclose(back.kernel, H.kernel, atol=1e-12 * n)


def test_hs_inner_is_representation_independent():
    H, K = rand_op(10, 6), rand_op(10, 7)
    ref = np.sum(H.kernel * K.kernel.conj())
    for via in opcalc.REPRESENTATIONS:
        assert np.isclose(opcalc.hs_inner(H, K, via), ref, rtol=1e-12)


def test_identity_spreading():
    L = 16
    I = HSOperator(np.eye(L))
    expected = np.zeros((L, L))
    expected[0, 0] = np.sqrt(L)
    np.testing.assert_allclose(I.spreading, expected, atol=1e-12)


def test_tf_shift_operator_spreading():
    # T_t M_nu has spreading sqrt(L) delta_(t, nu)
    L = 12
    H = HSOperator(tm_matrix(L, 5, 3))
    eta = H.spreading
    assert np.isclose(eta[5, 3], np.sqrt(L))
    assert np.isclose(np.linalg.norm(eta), np.sqrt(L))


def test_immutable_and_cached():
    H = rand_op(5, 8)
    with pytest.raises(ValueError):
        H.kernel[0, 0] = 1
    with pytest.raises(ValueError):
        H.spreading[0, 0] = 1
    assert H.spreading is H.spreading
    with pytest.raises(ValueError):
        HSOperator(np.ones((2, 3)))
    with pytest.raises(UnknownKind):
        opcalc.convert(H, "wigner")
    with pytest.raises(UnknownKind):
        HSOperator.from_representation(np.ones((5, 5)), "wigner")


@settings(max_examples=60, deadline=None)
@given(L=st.sampled_from([4, 6, 8, 16]), lam=st.tuples(*[st.integers(-40, 40)] * 4), seed=st.integers(0, 2**31))
def test_family_member_factorization(L, lam, seed):
    H0 = rand_op(L, seed)
    np.testing.assert_allclose(opcalc.family_member(H0, lam).kernel,
                               opcalc.family_member_factored(H0, lam).kernel, atol=1e-10)


def test_shift_spreading_definition():
    L = 8
    eta = rand_op(L, 9).spreading
    s, om, z, y = 3, 5, 2, 7
    out = opcalc.shift_spreading(eta, (s, om, z, y))
    for t in range(L):
        for nu in range(L):
            ref = np.exp(2j * np.pi * (z * (t - s) + y * (nu - om)) / L) * eta[(t - s) % L, (nu - om) % L]
            assert np.isclose(out[t, nu], ref, atol=1e-12)


def test_family_special_cases():
    # (s, omega, omega, 0) gives pi(s, omega) H0; (0, 0, z, y) conjugates H0
    L = 10
    H0 = rand_op(L, 10)
    s, om = 3, 4
    np.testing.assert_allclose(opcalc.family_member(H0, (s, om, om, 0)).kernel,
                               tm_matrix(L, s, om) @ H0.kernel, atol=1e-10)
    z, y = 2, 6
    P = opcalc.modulation_matrix(L, z) @ opcalc.translation_matrix(L, -y)
    np.testing.assert_allclose(opcalc.family_member(H0, (0, 0, z, y)).kernel,
                               P @ H0.kernel @ np.linalg.inv(P), atol=1e-10)


def test_gauss_kernel_matches_continuous_spreading():
    # kernel exp(-pi (x^2 + y^2)) has |eta(t, nu)| = 2**-1/2 exp(-pi (t^2 + nu^2) / 2);
    # on Z_L the sample spacing is L**-1/2
    L = 256
    eta = np.abs(opcalc.make_h0("gauss_kernel", L).spreading)
    r = tfcore.symmetric_rep(L) / np.sqrt(L)
    cont = np.exp(-np.pi * (r[:, None] ** 2 + r[None, :] ** 2) / 2) / np.sqrt(2)
    mask = cont > 1e-3 * cont.max()
    assert np.max(np.abs(eta[mask] - cont[mask]) / cont[mask]) < 0.02


def test_gauss_kernel_modulus_by_quadrature():
    # independent oracle: trapezoid quadrature of the continuous integral
    # eta(t, nu) = int kappa(x, x - t) exp(-2 pi i nu (x - t)) dx
    L = 256
    eta = opcalc.make_h0("gauss_kernel", L).spreading
    x = np.linspace(-8, 8, 4001)
    for t_i, nu_i in [(0, 0), (5, 0), (0, 7), (9, 12), (-20, 4)]:
        t, nu = t_i / np.sqrt(L), nu_i / np.sqrt(L)
        vals = np.exp(-np.pi * (x**2 + (x - t) ** 2)) * np.exp(-2j * np.pi * nu * (x - t))
        ref = abs(np.trapezoid(vals, x)) if hasattr(np, "trapezoid") else abs(np.trapz(vals, x))
        assert abs(abs(eta[t_i % L, nu_i % L]) - ref) < 0.02 * ref


def test_gauss_spreading_full_rank():
    H = opcalc.make_h0("gauss_spreading", 32)
    assert math.isclose(H.hs_norm, 1.0, rel_tol=1e-12)
    # Hermite-type spectrum: singular values fall off as (sqrt(2) - 1)**k
    sv = np.linalg.svd(H.kernel, compute_uv=False)
    np.testing.assert_allclose(sv[:6] / sv[0], (math.sqrt(2) - 1) ** np.arange(6), rtol=1e-6)
    assert np.linalg.matrix_rank(opcalc.make_h0("gauss_kernel", 32).kernel) == 1


def test_opw_box():
    H = opcalc.make_h0("opw_box", 16, a=4, b=4, normalize=True)
    eta = H.spreading
    assert np.allclose(eta[:4, :4], 0.25) and np.isclose(np.abs(eta).sum(), 4.0)
    with pytest.raises(InvalidParams):
        opcalc.make_h0("opw_box", 16, a=0, b=4)


def test_prod_conv():
    L = 12
    rng = np.random.default_rng(11)
    rho, r, f = (rng.standard_normal(L) + 0j for _ in range(3))
    H = opcalc.make_h0("prod_conv", L, rho=rho, r=r)
    conv = np.array([sum(f[y] * r[(x - y) % L] for y in range(L)) for x in range(L)])
    np.testing.assert_allclose(H(f), rho * conv, atol=1e-12)


def test_rank_one_spreading_is_scaled_stft():
    L = 16
    h, g0 = tfcore.make_window("random_unit", L, seed=1), tfcore.make_window("random_unit", L, seed=2)
    H = opcalc.make_h0("rank_one", L, h=h, g0=g0)
    f = tfcore.make_window("random_unit", L, seed=3)
    np.testing.assert_allclose(H(f), g0 * np.vdot(h, f), atol=1e-12)
    np.testing.assert_allclose(H.spreading, tfcore.stft(g0, h) / np.sqrt(L), atol=1e-12)


def test_unknown_kind():
    with pytest.raises(UnknownKind):
        opcalc.make_h0("nope", 8)
