import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infft import nfft
from infft.errors import DimensionMismatch, SizeLimitExceeded, ZeroWindowTransform
from infft.nfft import (
    build_index_set_grid,
    build_index_set_node,
    fourier_matrix,
    ndft_adjoint,
    ndft_forward,
    nfft_adjoint,
    nfft_forward,
    nfft_matrix,
    plan_build,
    spread_matrix,
)
from infft.nodes import NodeSet, equispaced, jittered, random_uniform
from infft.windows import WindowConfig, window_periodized

from conftest import rel_err


def _brute_index_set(x, n, m):
    return sorted(l for l in range(-n // 2, n // 2)
                  if any(-m <= n * x - l + n * z <= m for z in (-1, 0, 1)))


def test_ndft_trivial_cases():
    x = random_uniform(7, 1)
    fhat = np.zeros(8)
    fhat[4] = 1.0  # k = 0
    np.testing.assert_allclose(ndft_forward(x, fhat), np.ones(7))
    c = np.arange(8) + 1j
    assert ndft_forward(NodeSet([0.0]), c)[0] == pytest.approx(c.sum())
    np.testing.assert_array_equal(ndft_adjoint(x, np.zeros(7), 8), np.zeros(8))
    with pytest.raises(DimensionMismatch):
        ndft_adjoint(x, np.zeros(6), 8)


def test_ndft_matches_explicit_sum(gen):
    x = random_uniform(5, 2)
    fhat = gen.standard_normal(6) + 1j * gen.standard_normal(6)
    ref = [sum(fhat[i] * np.exp(2j * np.pi * k * xj) for i, k in enumerate(range(-3, 3))) for xj in x.points]
    np.testing.assert_allclose(ndft_forward(x, fhat), ref, rtol=1e-13)


def test_ndft_adjoint_identity(gen):
    x = random_uniform(40, 3)
    fhat = gen.standard_normal(32) + 1j * gen.standard_normal(32)
    f = gen.standard_normal(40) + 1j * gen.standard_normal(40)
    lhs = np.vdot(f, ndft_forward(x, fhat))
    rhs = np.vdot(ndft_adjoint(x, f, 32), fhat)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


@pytest.mark.parametrize("N,M", [(16, 16), (8, 32), (64, 256)])
def test_equispaced_rows_orthogonal(N, M):
    A = nfft_matrix(equispaced(N), M)
    assert np.linalg.norm(A @ A.conj().T - M * np.eye(N)) <= 1e-10 * M * np.sqrt(N)


@pytest.mark.parametrize("N,M", [(16, 16), (32, 8), (256, 64)])
def test_equispaced_columns_orthogonal(N, M):
    A = nfft_matrix(equispaced(N), M)
    assert np.linalg.norm(A.conj().T @ A - N * np.eye(M)) <= 1e-10 * N * np.sqrt(M)


def test_dense_size_limit(monkeypatch):
    monkeypatch.setattr(nfft, "DENSE_LIMIT", 100)
    with pytest.raises(SizeLimitExceeded):
        nfft_matrix(random_uniform(11, 0), 10)
    with pytest.raises(SizeLimitExceeded):
        fourier_matrix(16, 32)


def test_index_set_examples():
    np.testing.assert_array_equal(build_index_set_node(0.0, 16, 2), [-2, -1, 0, 1, 2])
    np.testing.assert_array_equal(build_index_set_node(0.49, 16, 2), [-8, -7, 6, 7])
    assert _brute_index_set(0.49, 16, 2) == [-8, -7, 6, 7]


def test_index_set_matches_brute_force(gen):
    for x in gen.uniform(-0.5, 0.5, 1000):
        s = build_index_set_node(x, 32, 3)
        assert len(s) <= 7
    for x in gen.uniform(-0.5, 0.5, 100):
        assert build_index_set_node(x, 24, 2).tolist() == _brute_index_set(x, 24, 2)


def test_grid_index_set_duality_and_counts():
    x = jittered(32, 0.25, 4)
    n, m = 32, 2
    for l in range(-n // 2, n // 2):
        js = build_index_set_grid(l, x, n, m)
        brute = [j for j in range(x.N) if l in build_index_set_node(x.points[j], n, m)]
        assert js.tolist() == brute
        assert 2 * m <= len(js) <= 2 * m + 2
    far = NodeSet([0.0, 0.01])
    assert build_index_set_grid(-16, far, 32, 2).size == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4), st.sampled_from([16, 24, 64]))
def test_duality_property(seed, m, n):
    x = random_uniform(20, seed)
    for j in range(x.N):
        for l in build_index_set_node(x.points[j], n, m):
            assert j in build_index_set_grid(int(l), x, n, m)


def test_plan_structure():
    cfg = WindowConfig("kaiser_bessel", 3, 32, 2.0)
    x = random_uniform(50, 8)
    plan = plan_build(cfg, x)
    assert plan.row_nnz().max() <= 2 * cfg.m + 1
    assert np.all(plan.D != 0)
    B = plan.B.tocoo()
    expect = window_periodized(cfg, x.points[B.row] - (B.col - cfg.M_sigma // 2) / cfg.M_sigma)
    np.testing.assert_allclose(B.data, expect, rtol=1e-14)


def test_bfd_reconstructs_matrix():
    cfg = WindowConfig("kaiser_bessel", 6, 64, 2.0)
    x = jittered(64, 0.25, 1)
    plan = plan_build(cfg, x)
    BFD = plan.B.toarray() @ (fourier_matrix(64, cfg.M_sigma) * plan.D)
    assert np.abs(BFD - nfft_matrix(x, 64)).max() <= 1e-10


def test_fast_matches_dense(gen):
    cfg = WindowConfig("kaiser_bessel", 6, 256, 2.0)
    x = random_uniform(256, 9)
    plan = plan_build(cfg, x)
    fhat = gen.standard_normal(256) + 1j * gen.standard_normal(256)
    assert rel_err(nfft_forward(plan, fhat), ndft_forward(x, fhat)) <= 1e-10
    f = gen.standard_normal(256) + 1j * gen.standard_normal(256)
    assert rel_err(nfft_adjoint(plan, f), ndft_adjoint(x, f, 256)) <= 1e-10
    e0 = np.zeros(256)
    e0[128] = 1
    assert np.abs(nfft_forward(plan, e0) - 1).max() <= 1e-10


def test_linearity_and_zero(gen):
    cfg = WindowConfig("bspline", 3, 32, 2.0)
    plan = plan_build(cfg, random_uniform(20, 4))
    a, b = gen.standard_normal(32), gen.standard_normal(32) * 1j
    lhs = nfft_forward(plan, 2.5 * a - 1j * b)
    rhs = 2.5 * nfft_forward(plan, a) - 1j * nfft_forward(plan, b)
    assert np.abs(lhs - rhs).max() <= 1e-13 * np.abs(lhs).max()
    np.testing.assert_array_equal(nfft_adjoint(plan, np.zeros(20)), 0)
    with pytest.raises(DimensionMismatch):
        nfft_forward(plan, np.zeros(31))


@pytest.mark.parametrize("kind", ["bspline", "gaussian", "kaiser_bessel"])
def test_fast_pair_is_exactly_adjoint(kind, gen):
    cfg = WindowConfig(kind, 2, 64, 1.5)
    plan = plan_build(cfg, random_uniform(70, 2))
    for _ in range(5):
        fhat = gen.standard_normal(64) + 1j * gen.standard_normal(64)
        f = gen.standard_normal(70) + 1j * gen.standard_normal(70)
        lhs = np.vdot(f, nfft_forward(plan, fhat))
        rhs = np.vdot(nfft_adjoint(plan, f), fhat)
        assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_error_decreases_with_cutoff(gen):
    x = random_uniform(128, 12)
    errs = {m: [] for m in (2, 4, 6)}
    for _ in range(10):
        fhat = gen.standard_normal(128) + 1j * gen.standard_normal(128)
        ref = ndft_forward(x, fhat)
        for m in errs:
            plan = plan_build(WindowConfig("kaiser_bessel", m, 128, 2.0), x)
            errs[m].append(rel_err(nfft_forward(plan, fhat), ref))
    means = [np.mean(errs[m]) for m in (2, 4, 6)]
    assert means[0] > means[1] > means[2]


def test_plan_rejects_vanishing_transform():
    with pytest.raises(ZeroWindowTransform):
        plan_build(WindowConfig("sinc", 2, 16, 1.0), random_uniform(4, 0))


def test_spread_matrix_wraps_near_boundary():
    cfg = WindowConfig("bspline", 2, 16, 1.0)
    B = spread_matrix(cfg, NodeSet([0.49])).toarray()
    nz = np.flatnonzero(B[0]) - 8
    assert sorted(nz.tolist()) == [-8, -7, 6, 7]
