"""Direct inverse NFFT for the square case ``M = N`` by Lagrange interpolation.

For nonequispaced nodes ``y_j`` and equispaced targets ``x_l`` the values of a
trigonometric polynomial of degree ``N`` satisfy

    g_l = a_l * sum_j f_j b_j (cot(pi (x_l - y_j)) - i),

    a_l = prod_n sin(pi (x_l - y_n)),   b_j = prod_{n != j} 1 / sin(pi (y_j - y_n)).

The products are formed in the log domain by a log|sin| fast summation, the
cotangent sum by a second fast summation, and the Fourier coefficients are then
one FFT of the ``g_l`` away.  Everything is ``O(N log N)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import CoincidentNodes, DimensionMismatch, InvalidParameter
from .fastsum import COTANGENT, LOGSIN, FastsumPlan, default_expansion_size, fastsum_apply, fastsum_plan
from .nfft import fft_workers
from .nodes import NodeSet, rng
from .windows import frequencies

__all__ = [
    "QuadraticParams",
    "LagrangeCoefficients",
    "QuadraticPlan",
    "log_magnitudes",
    "stabilization_shift",
    "sign_correction",
    "lagrange_coefficients",
    "equispaced_targets",
    "quadratic_plan",
    "infft_quadratic",
    "infft_adjoint_quadratic",
]


@dataclass(frozen=True)
class QuadraticParams:
    """Fast-summation and target-grid settings.

    ``n=None`` picks :func:`default_expansion_size`, ``eps_I=None`` picks
    ``2p/n`` and ``inner_m=None`` ties the inner NFFT cut-off to ``p``.
    ``delta`` is the offset of the equispaced targets (default ``1/(2N)``);
    if a target lands within ``collision_tol / N`` of a source, new offsets are
    drawn from ``seed`` up to ``max_retries`` times.
    """

    p: int = 12
    n: int | None = None
    eps_I: float | None = None
    inner_m: int | None = None
    delta: float | None = None
    seed: int = 0
    max_retries: int = 8
    collision_tol: float = 1e-6


@dataclass(frozen=True, eq=False)
class LagrangeCoefficients:
    a: np.ndarray
    b: np.ndarray
    log_a: np.ndarray
    log_b: np.ndarray
    s: float
    sign_a: np.ndarray
    sign_b: np.ndarray


def _fastsum_plans(N, params: QuadraticParams):
    n = params.n or default_expansion_size(N)
    kw = dict(n=n, p=params.p, eps_I=params.eps_I, inner_m=params.inner_m)
    return fastsum_plan(LOGSIN, **kw), fastsum_plan(COTANGENT, **kw)


def log_magnitudes(targets: NodeSet, sources: NodeSet, fs: FastsumPlan | None = None):
    """``log|a_l|`` and ``log|b_j|`` by log|sin| fast summation.

    ``log|b_j|`` sums over the sources themselves with the singular self term
    left out.
    """
    if fs is None:
        fs = _fastsum_plans(sources.N, QuadraticParams())[0]
    ones = np.ones(sources.N)
    log_a = fastsum_apply(fs, sources, ones, targets).real
    log_b = -fastsum_apply(fs, sources, ones, sources, exclude_self=True).real
    return log_a, log_b


def stabilization_shift(log_a, log_b) -> float:
    """Shift ``s`` balancing ``max(log_a + s)`` against ``max(log_b - s)``."""
    return 0.5 * (float(np.max(log_b)) - float(np.max(log_a)))


def sign_correction(targets: NodeSet, sources: NodeSet):
    """Signs of ``a_l`` and ``b_j``.

    ``sin(pi (x - y))`` is negative exactly when ``x < y`` (both in
    ``[-1/2, 1/2)``), so ``sign(a_l)`` is the parity of the number of sources
    above ``x_l`` and, for sorted distinct sources, ``sign(b_j) = (-1)^(N-j)``.
    """
    y = sources.points
    if not sources.sorted:
        y = np.sort(y)
    N = y.size
    above = N - np.searchsorted(y, targets.points, side="right")
    sign_a = np.where(above % 2, -1.0, 1.0)
    sign_b = np.where((N - 1 - np.arange(N)) % 2, -1.0, 1.0)
    return sign_a, sign_b


def lagrange_coefficients(targets: NodeSet, sources: NodeSet, fs: FastsumPlan | None = None) -> LagrangeCoefficients:
    """Signed, stabilized ``a_l`` and ``b_j`` for sorted sources."""
    if not sources.sorted:
        raise InvalidParameter("sources must be sorted")
    log_a, log_b = log_magnitudes(targets, sources, fs)
    s = stabilization_shift(log_a, log_b)
    sign_a, sign_b = sign_correction(targets, sources)
    a = sign_a * np.exp(log_a + s)
    b = sign_b * np.exp(log_b - s)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise FloatingPointError("Lagrange coefficients overflow even after stabilization")
    return LagrangeCoefficients(a, b, log_a, log_b, s, sign_a, sign_b)


def equispaced_targets(N: int, delta: float) -> NodeSet:
    """``x_l = -1/2 + (l-1)/N + delta`` for ``l = 1..N`` (``0 <= delta < 1/N``)."""
    return NodeSet(-0.5 + np.arange(N) / N + delta, sorted=True)


def _min_distance(x, y_sorted):
    # wrapped distance from each x to the nearest y
    idx = np.searchsorted(y_sorted, x)
    lo = y_sorted[(idx - 1) % y_sorted.size]
    hi = y_sorted[idx % y_sorted.size]
    d = np.minimum(np.abs(x - lo), np.abs(hi - x))
    return np.minimum(d, 1.0 - d).min()


def _choose_delta(N, y_sorted, params: QuadraticParams) -> float:
    tol = params.collision_tol / N
    delta = 0.5 / N if params.delta is None else float(params.delta)
    gen = rng(params.seed)
    for attempt in range(params.max_retries + 1):
        if not 0 <= delta < 1.0 / N:
            raise InvalidParameter(f"delta must lie in [0, 1/N), got {delta}")
        if _min_distance(-0.5 + np.arange(N) / N + delta, y_sorted) > tol:
            return delta
        delta = gen.uniform(0.0, 1.0 / N)
    raise CoincidentNodes(
        f"no target offset keeps the grid {tol:.3g} away from the sources after {params.max_retries} retries"
    )


@dataclass(frozen=True, eq=False)
class QuadraticPlan:
    """Node-dependent precomputation shared by the inverse and its adjoint."""

    sources: NodeSet  # sorted
    perm: np.ndarray  # sources = original[perm]
    targets: NodeSet
    delta: float
    coeffs: LagrangeCoefficients
    cot_plan: FastsumPlan
    params: QuadraticParams = field(default_factory=QuadraticParams)

    @property
    def N(self) -> int:
        return self.sources.N

    def _twiddle(self):
        k = frequencies(self.N)
        return np.where(k % 2, -1.0, 1.0) * np.exp(-2j * np.pi * k * self.delta)

    def solve(self, f) -> np.ndarray:
        """Fourier coefficients ``f_hat`` with ``A f_hat = f`` (``f`` in caller order)."""
        f = np.asarray(f, dtype=complex)
        if f.shape != (self.N,):
            raise DimensionMismatch(f"expected {self.N} samples, got {f.shape}")
        fb = f[self.perm] * self.coeffs.b
        g_tilde = fastsum_apply(self.cot_plan, self.sources, fb, self.targets)
        g = self.coeffs.a * (g_tilde - 1j * fb.sum())
        G = scipy.fft.fft(g, workers=fft_workers())
        k = frequencies(self.N)
        return self._twiddle() * G[k % self.N] / self.N

    def solve_adjoint(self, h) -> np.ndarray:
        """Samples ``f`` with ``A^* f = h``, returned in caller order."""
        h = np.asarray(h, dtype=complex)
        if h.shape != (self.N,):
            raise DimensionMismatch(f"expected {self.N} coefficients, got {h.shape}")
        k = frequencies(self.N)
        # v_l = (1/N) sum_k h_k exp(2 pi i k x_l)
        H = np.zeros(self.N, dtype=complex)
        H[k % self.N] = h * np.conj(self._twiddle())
        v = scipy.fft.ifft(H, workers=fft_workers())
        av = self.coeffs.a * v
        # cot is odd: sum_l av_l cot(pi (x_l - y_j)) = -sum_l av_l cot(pi (y_j - x_l))
        s = -fastsum_apply(self.cot_plan, self.targets, av, self.sources)
        out = np.empty(self.N, dtype=complex)
        out[self.perm] = self.coeffs.b * (s + 1j * av.sum())
        return out


def quadratic_plan(sources: NodeSet, params: QuadraticParams | None = None) -> QuadraticPlan:
    params = params or QuadraticParams()
    N = sources.N
    if N % 2:
        raise InvalidParameter(f"the square inverse needs an even number of nodes, got {N}")
    y, perm = sources.sort()
    if N > 1 and (np.any(np.diff(y.points) == 0) or y.points[0] + 1.0 == y.points[-1]):
        raise CoincidentNodes("source nodes must be distinct")
    delta = _choose_delta(N, y.points, params)
    targets = equispaced_targets(N, delta)
    fs_log, fs_cot = _fastsum_plans(N, params)
    coeffs = lagrange_coefficients(targets, y, fs_log)
    return QuadraticPlan(y, perm, targets, delta, coeffs, fs_cot, params)


def infft_quadratic(sources: NodeSet, f, params: QuadraticParams | None = None) -> np.ndarray:
    """Reconstruct ``N`` Fourier coefficients from ``N`` samples at ``sources``."""
    return quadratic_plan(sources, params).solve(f)


def infft_adjoint_quadratic(sources: NodeSet, h, params: QuadraticParams | None = None) -> np.ndarray:
    """Reconstruct the samples ``f`` from ``h = A^* f``."""
    return quadratic_plan(sources, params).solve_adjoint(h)
