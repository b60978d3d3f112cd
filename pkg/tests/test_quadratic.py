import time
import warnings

import numpy as np
import pytest

from infft.errors import CoincidentNodes, DimensionMismatch, InvalidParameter
from infft.nfft import ndft_adjoint, ndft_forward, nfft_matrix
from infft.nodes import NodeSet, chebyshev, equispaced, jittered, logarithmic, random_uniform
from infft.quadratic import (
    QuadraticParams,
    equispaced_targets,
    infft_adjoint_quadratic,
    infft_quadratic,
    lagrange_coefficients,
    log_magnitudes,
    quadratic_plan,
    sign_correction,
    stabilization_shift,
)
from infft.windows import frequencies

from conftest import rel_err


def _direct_ab(x, y):
    dx = np.sin(np.pi * (x[:, None] - y[None, :]))
    dy = np.sin(np.pi * (y[:, None] - y[None, :]))
    np.fill_diagonal(dy, 1.0)
    return dx.prod(axis=1), 1.0 / dy.prod(axis=1)


def _direct_inverse(y, f, delta):
    N = y.size
    x = -0.5 + np.arange(N) / N + delta
    a, b = _direct_ab(x, y)
    cot = 1 / np.tan(np.pi * (x[:, None] - y[None, :]))
    g = a * ((cot - 1j) @ (f * b))
    k = frequencies(N)
    return np.exp(-2j * np.pi * np.outer(k, x)) @ g / N


def _direct_adjoint(y, h, delta):
    N = y.size
    x = -0.5 + np.arange(N) / N + delta
    a, b = _direct_ab(x, y)
    k = frequencies(N)
    v = np.exp(2j * np.pi * np.outer(x, k)) @ h / N
    cot = 1 / np.tan(np.pi * (x[:, None] - y[None, :]))
    return b * ((cot + 1j).T @ (a * v))


@pytest.fixture
def case8(gen):
    y = jittered(8, 0.25, 3)
    fhat = gen.uniform(1, 100, 8)
    return y, fhat, ndft_forward(y, fhat)


def test_matches_dense_solve(case8):
    y, fhat, f = case8
    ref = np.linalg.solve(nfft_matrix(y, 8), f)
    assert rel_err(infft_quadratic(y, f), ref, 2) <= 1e-8
    assert rel_err(ref, fhat, 2) <= 1e-12


def test_matches_direct_lagrange_formula(case8):
    y, _, f = case8
    plan = quadratic_plan(y)
    ref = _direct_inverse(y.points, f, plan.delta)
    assert np.abs(plan.solve(f) - ref).max() <= 1e-9 * np.abs(ref).max()


def test_lagrange_relation_exact_on_polynomials(gen):
    y = random_uniform(10, 2).sort()[0]
    fhat = gen.standard_normal(10) + 1j * gen.standard_normal(10)
    np.testing.assert_allclose(_direct_inverse(y.points, ndft_forward(y, fhat), 0.05), fhat, rtol=1e-9)


def test_adjoint_matches_direct_formula(gen):
    y = jittered(8, 0.25, 5)
    h = gen.standard_normal(8) + 1j * gen.standard_normal(8)
    plan = quadratic_plan(y)
    ref = _direct_adjoint(y.points, h, plan.delta)
    assert np.abs(plan.solve_adjoint(h) - ref).max() <= 1e-9 * np.abs(ref).max()


def test_adjoint_recovers_samples(gen):
    y = jittered(8, 0.25, 6)
    f = gen.standard_normal(8) + 1j * gen.standard_normal(8)
    assert rel_err(infft_adjoint_quadratic(y, ndft_adjoint(y, f, 8)), f, 2) <= 1e-7
    np.testing.assert_array_equal(infft_adjoint_quadratic(y, np.zeros(8)), 0)


def test_constant_samples():
    y = jittered(16, 0.25, 1)
    out = infft_quadratic(y, np.full(16, 3.0))
    assert out[8] == pytest.approx(3.0, rel=1e-9)
    assert np.abs(np.delete(out, 8)).max() <= 1e-9


def test_caller_order_preserved(gen):
    y = jittered(16, 0.25, 2)
    perm = gen.permutation(16)
    ys = NodeSet(y.points[perm])
    fhat = gen.uniform(1, 100, 16)
    np.testing.assert_allclose(infft_quadratic(ys, ndft_forward(ys, fhat)), fhat, rtol=1e-8)
    f = gen.standard_normal(16)
    np.testing.assert_allclose(infft_adjoint_quadratic(ys, ndft_adjoint(ys, f, 16)), f, rtol=1e-7, atol=1e-8)


@pytest.mark.parametrize("c", [4, 6, 8, 10])
def test_consistency_jittered(c, gen):
    N = 2**c
    y = jittered(N, 0.25, c)
    f = gen.standard_normal(N) + 1j * gen.standard_normal(N)
    assert rel_err(ndft_forward(y, infft_quadratic(y, f)), f, 2) <= 1e-6


def test_log_magnitudes_single_node():
    y, x = NodeSet([0.1]), NodeSet([-0.2])
    la, lb = log_magnitudes(x, y)
    assert la[0] == pytest.approx(np.log(abs(np.sin(np.pi * -0.3))), abs=1e-9)
    assert lb[0] == pytest.approx(0.0, abs=1e-9)


def test_log_magnitudes_direct(gen):
    y = random_uniform(16, 3)
    x = random_uniform(16, 4)
    la, lb = log_magnitudes(x, y)
    a, b = _direct_ab(x.points, y.points)
    assert np.abs(la - np.log(np.abs(a))).max() <= 1e-8
    assert np.abs(lb - np.log(np.abs(b))).max() <= 1e-8
    la2, lb2 = log_magnitudes(x.shifted(0.137), y.shifted(0.137))
    assert np.abs(la2 - la).max() <= 1e-8 and np.abs(lb2 - lb).max() <= 1e-8


def test_stabilization_shift():
    assert stabilization_shift(np.full(4, -100.0), np.full(4, 100.0)) == 100.0
    v = np.array([1.0, -2.0, 3.5])
    assert stabilization_shift(v, v) == 0.0


def test_stabilized_product_identity(gen):
    for N in (4, 16, 32):
        y = jittered(N, 0.25, N).sort()[0]
        x = equispaced_targets(N, 0.5 / N)
        co = lagrange_coefficients(x, y)
        a, b = _direct_ab(x.points, y.points)
        np.testing.assert_allclose(np.outer(co.a, co.b), np.outer(a, b), rtol=1e-10)
        np.testing.assert_allclose(co.sign_a * np.exp(co.log_a + co.s), co.a)
        la, lb = co.log_a[:, None], co.log_b[None, :]
        np.testing.assert_allclose(np.exp(la + co.s) * np.exp(lb - co.s), np.exp(la + lb), rtol=1e-13)


def test_sign_correction(gen):
    y = random_uniform(8, 9).sort()[0]
    x = random_uniform(8, 10)
    sa, sb = sign_correction(x, y)
    a, b = _direct_ab(x.points, y.points)
    np.testing.assert_array_equal(sa, np.sign(a))
    np.testing.assert_array_equal(sb, np.sign(b))
    assert sb[-1] == 1
    sa, _ = sign_correction(NodeSet([0.49]), y)
    assert sa[0] == 1


def test_parameter_errors():
    with pytest.raises(InvalidParameter):
        quadratic_plan(jittered(7))
    with pytest.raises(CoincidentNodes):
        quadratic_plan(NodeSet([0.1, 0.1, 0.2, 0.3]))
    with pytest.raises(DimensionMismatch):
        quadratic_plan(jittered(8)).solve(np.zeros(6))
    with pytest.raises(InvalidParameter):
        quadratic_plan(jittered(8), QuadraticParams(delta=0.2))


def test_target_collision_retry(gen):
    # the sources sit exactly on the default targets
    N = 16
    y = equispaced_targets(N, 0.5 / N)
    plan = quadratic_plan(y)
    assert plan.delta != 0.5 / N
    fhat = gen.uniform(1, 100, N)
    np.testing.assert_allclose(plan.solve(ndft_forward(y, fhat)), fhat, rtol=1e-8)
    with pytest.raises(CoincidentNodes):
        quadratic_plan(y, QuadraticParams(max_retries=0))


@pytest.mark.parametrize("make", [chebyshev, logarithmic], ids=["chebyshev", "logarithmic"])
def test_ill_conditioned_nodes_run(make, gen):
    y = make(32)
    f = gen.standard_normal(32)
    out = infft_quadratic(y, f)
    assert out.shape == (32,) and np.all(np.isfinite(out))


def test_equispaced_sources():
    y = equispaced(16)
    fhat = np.arange(16.0) + 1
    np.testing.assert_allclose(infft_quadratic(y, ndft_forward(y, fhat)), fhat, rtol=1e-8)


@pytest.mark.slow
def test_complexity_soft():
    times = []
    for c in (10, 12, 14):
        y = jittered(2**c, 0.25, 0)
        t = time.perf_counter()
        infft_quadratic(y, np.ones(2**c))
        times.append(time.perf_counter() - t)
    if times[-1] / times[0] > 16 * 1.5 * 1.4:
        warnings.warn(f"quadratic inverse timings {np.round(times, 3)} grow faster than N log N", stacklevel=1)
