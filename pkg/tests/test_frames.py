import numpy as np
import pytest

from infft.errors import DimensionMismatch, InvalidParameter
from infft.frames import (
    adjoint_as_frame,
    admissibility_condition,
    assemble_phi,
    assemble_psi,
    frame_coefficients,
    frame_reconstruction,
    frame_system,
    pinv,
    theorem_bound_check,
    transpose_identity_check,
)
from infft.nfft import plan_build
from infft.nodes import jittered, random_uniform
from infft.rect import optimize_B, optimize_B_star
from infft.windows import WindowConfig, window_hat

W = "window"


def test_phi_entries_direct_sum():
    cfg = WindowConfig("bspline", 2, 8, 1.0)
    x = random_uniform(5, 1)
    phi = assemble_phi(cfg, x)
    k = np.arange(-4, 4)
    what = window_hat(cfg, -k)
    for j in range(5):
        for l in range(-4, 4):
            t = x.points[j] - l / 8
            K = np.sum(np.exp(2j * np.pi * k * t) / what) / 8
            assert phi[j, l + 4] == pytest.approx(np.conj(K), rel=1e-12)


def test_phi_is_gram_of_phi_and_psi():
    # Phi[j, l] = <phi_j, psi_l> = sum_k phi_j(k) conj(psi_l(k)) = -M/2 .. M/2-1
    cfg = WindowConfig("kaiser_bessel", 3, 16, 2.0)
    x = random_uniform(7, 2)
    k = np.arange(-8, 8)
    phis = np.exp(-2j * np.pi * np.outer(x.points, k))  # rows phi_j(k)
    psi = assemble_psi(cfg)
    gram = phis @ psi.conj()
    np.testing.assert_allclose(assemble_phi(cfg, x), gram, atol=1e-12 * np.abs(gram).max())


def test_psi_entries():
    cfg = WindowConfig("gaussian", 4, 8, 2.0)
    psi = assemble_psi(cfg)
    for k in (-4, 0, 3):
        for l in (-8, 1, 7):
            ref = np.exp(-2j * np.pi * k * l / 16) / (16 * window_hat(cfg, -k))
            assert psi[k + 4, l + 8] == pytest.approx(ref, rel=1e-13)


def test_pinv_against_numpy(gen):
    a = gen.standard_normal((9, 5)) + 1j * gen.standard_normal((9, 5))
    np.testing.assert_allclose(pinv(a), np.linalg.pinv(a), atol=1e-12)
    low = a[:, :2] @ gen.standard_normal((2, 5))
    p = pinv(low)
    np.testing.assert_allclose(low @ p @ low, low, atol=1e-12)
    np.testing.assert_allclose(p @ low @ p, p, atol=1e-10)


def test_frame_coefficients_and_reconstruction(gen):
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    x = jittered(64, 0.25, 1)
    fr = frame_system(cfg, x)
    f = gen.standard_normal(64) + 1j * gen.standard_normal(64)
    d = frame_coefficients(fr, f)
    ref = np.linalg.lstsq(fr.phi, f, rcond=None)[0]
    assert np.linalg.norm(d - ref) <= 1e-8 * np.linalg.norm(ref)
    np.testing.assert_allclose(frame_reconstruction(fr, d), fr.psi @ d)
    with pytest.raises(DimensionMismatch):
        frame_coefficients(fr, f[:-1])
    with pytest.raises(DimensionMismatch):
        frame_reconstruction(fr, d[:-1])


def test_adjoint_as_frame_matches_nfft(gen):
    cfg = WindowConfig("kaiser_bessel", 4, 32, 2.0)
    x = random_uniform(40, 3)
    plan = plan_build(cfg, x)
    f = gen.standard_normal(40) + 1j * gen.standard_normal(40)
    c, h = adjoint_as_frame(plan, f)
    np.testing.assert_allclose(c, plan.B.conj().T @ f)
    assert h.shape == (32,)


def _bound_instances(N, M, sigma, count, seed):
    rng = np.random.default_rng(seed)
    cfg = WindowConfig("bspline", 2, M, sigma)
    for _ in range(count):
        x = jittered(N, 0.25, int(rng.integers(2**31)))
        yield cfg, x, rng.standard_normal(N) + 1j * rng.standard_normal(N)


@pytest.mark.parametrize("N,M,side", [(64, 16, "N"), (16, 64, "M")])
def test_theorem_bound_random_instances(N, M, side):
    worst = 0.0
    for cfg, x, f in _bound_instances(N, M, 1.0, 100, N + M):
        fr = frame_system(cfg, x)
        lhs, rhs = theorem_bound_check(fr, plan_build(cfg, x), f, side)
        worst = max(worst, lhs / rhs)
    assert worst <= 1.0


def test_theorem_bound_with_optimized_matrix(gen):
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    x = jittered(64, 0.25, 9)
    fr = frame_system(cfg, x)
    plan = plan_build(cfg, x)
    Bo = optimize_B(cfg, x, W)
    f = gen.standard_normal(64)
    lhs0, rhs0 = theorem_bound_check(fr, plan, f)
    lhs, rhs = theorem_bound_check(fr, plan, f, B=Bo)
    assert lhs <= rhs and lhs0 <= rhs0


def test_theorem_bound_homogeneous(gen):
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    x = jittered(64, 0.25, 2)
    fr, plan = frame_system(cfg, x), plan_build(cfg, x)
    f = gen.standard_normal(64)
    l1, r1 = theorem_bound_check(fr, plan, f)
    l2, r2 = theorem_bound_check(fr, plan, 3.5 * f)
    assert l2 == pytest.approx(3.5 * l1, rel=1e-10) and r2 == pytest.approx(3.5 * r1, rel=1e-10)


def test_theorem_bound_dimension_checks():
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    fr = frame_system(cfg, jittered(64, 0.25, 0))
    plan = plan_build(cfg, jittered(64, 0.25, 0))
    with pytest.raises(DimensionMismatch):
        theorem_bound_check(fr, plan, np.ones(64), "M")
    with pytest.raises(InvalidParameter):
        theorem_bound_check(fr, plan, np.ones(64), "X")
    sq = frame_system(cfg, jittered(16, 0.25, 0))
    with pytest.raises(DimensionMismatch):
        theorem_bound_check(sq, plan_build(cfg, jittered(16, 0.25, 0)), np.ones(16))


@pytest.mark.parametrize("kind,m", [("bspline", 2), ("kaiser_bessel", 4)])
def test_transpose_identity_windows(kind, m):
    cfg = WindowConfig(kind, m, 16, 1.0 if kind == "bspline" else 2.0)
    x = jittered(32, 0.25, 0)
    assert transpose_identity_check(cfg, x) <= 1e-12


def test_transpose_identity_optimized():
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    x = jittered(32, 0.25, 0)
    Bo = optimize_B(cfg, x, W)
    scale = np.abs(Bo.B.data).max()
    assert transpose_identity_check(cfg, x, Bo) <= 1e-12 * max(1.0, scale)
    cfg = WindowConfig("bspline", 2, 64, 1.0)
    x = jittered(16, 0.25, 0)
    Bo = optimize_B_star(cfg, x, W)
    assert transpose_identity_check(cfg, x, Bo) <= 1e-12 * max(1.0, np.abs(Bo.B.data).max())


def test_admissibility():
    assert admissibility_condition(128, 64, 1.0, 1.0)
    assert not admissibility_condition(127, 64, 1.0, 1.0)
    assert not admissibility_condition(64, 64, 1.0, 3.0)
    assert admissibility_condition(64 + 8, 64, 1.0, 1.5)
    with pytest.raises(InvalidParameter):
        admissibility_condition(10, 4, 1.0, 0.5)
