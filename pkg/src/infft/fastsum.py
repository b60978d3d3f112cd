"""NFFT-based fast summation for 1-periodic kernels singular at the integers.

Computes ``g(x_l) = sum_j alpha_j K(x_l - y_j)`` for ``K(x) = cot(pi x)`` or
``K(x) = ln|sin(pi x)|``.  The kernel is split as ``K = K_R + (K - K_R)``:

* ``K_R`` equals ``K`` outside the near field ``dist(x, Z) < eps_I`` and is a
  polynomial inside it, matching ``p`` derivatives at ``+-eps_I`` (two-point
  Hermite interpolation, degree ``2p-1``).  Its ``n`` Fourier coefficients
  come from an FFT of equispaced samples; the far field is then
  ``A_x (b * A_y^* alpha)`` evaluated with two NFFTs.
* ``K - K_R`` vanishes outside the near field and is summed directly over the
  source/target pairs closer than ``eps_I`` (wrapped distance).

Since the singularities at ``0`` and ``+-1`` coincide modulo one, a single
near-field region per period handles both.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft
from numpy.polynomial import polynomial as P

from .errors import CoincidentNodes, DimensionMismatch, InvalidParameter
from .nfft import fft_workers, nfft_adjoint, nfft_forward, plan_build
from .nodes import NodeSet
from .windows import WindowConfig, WindowKind, frequencies, reduce_periodic

__all__ = [
    "KernelKind",
    "PeriodicKernel",
    "COTANGENT",
    "LOGSIN",
    "FastsumPlan",
    "fastsum_plan",
    "fastsum_apply",
    "fastsum_direct",
    "default_expansion_size",
]


class KernelKind(str, enum.Enum):
    COTANGENT = "cotangent"
    LOGSIN = "logsin"


@lru_cache(maxsize=None)
def _cot_derivative_poly(order: int) -> np.ndarray:
    # d^k/dx^k cot(pi x) = pi^k P_k(cot(pi x)),  P_0(c) = c,  P_{k+1} = -(1 + c^2) P_k'
    poly = np.array([0.0, 1.0])
    for _ in range(order):
        poly = -P.polymul([1.0, 0.0, 1.0], P.polyder(poly))
    return poly


@dataclass(frozen=True)
class PeriodicKernel:
    kind: KernelKind

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))

    @property
    def parity(self) -> str:
        return "odd" if self.kind is KernelKind.COTANGENT else "even"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            if self.kind is KernelKind.COTANGENT:
                return 1.0 / np.tan(np.pi * x)
            return np.log(np.abs(np.sin(np.pi * x)))

    def derivative(self, x, order: int):
        """``order``-th derivative at ``x`` (``order = 0`` is the kernel itself)."""
        if order == 0:
            return self(x)
        c = 1.0 / np.tan(np.pi * np.asarray(x, dtype=float))
        if self.kind is KernelKind.COTANGENT:
            return np.pi**order * P.polyval(c, _cot_derivative_poly(order))
        return np.pi**order * P.polyval(c, _cot_derivative_poly(order - 1))


COTANGENT = PeriodicKernel(KernelKind.COTANGENT)
LOGSIN = PeriodicKernel(KernelKind.LOGSIN)


@dataclass(frozen=True, eq=False)
class FastsumPlan:
    kernel: PeriodicKernel
    n: int
    p: int
    eps_I: float
    coeffs: np.ndarray  # Fourier coefficients of K_R, k = -n/2 .. n/2-1
    poly: np.ndarray  # K_R on the near field in powers of x / eps_I
    inner_sigma: float = 2.0
    inner_m: int = 8

    def regularized(self, x):
        """``K_R(x)``: the kernel outside the near field, the polynomial inside."""
        r = reduce_periodic(x)
        out = np.empty_like(r)
        near = np.abs(r) < self.eps_I
        out[near] = P.polyval(r[near] / self.eps_I, self.poly)
        with np.errstate(divide="ignore"):
            out[~near] = self.kernel(r[~near])
        return out

    def series(self, x):
        """The truncated Fourier series of ``K_R``, i.e. what the far field actually uses."""
        x = np.asarray(x, dtype=float).ravel()
        return (np.exp(2j * np.pi * np.outer(x, frequencies(self.n))) @ self.coeffs)

    def inner_config(self) -> WindowConfig:
        return WindowConfig(WindowKind.KAISER_BESSEL, self.inner_m, self.n, self.inner_sigma)


def default_expansion_size(N: int) -> int:
    """Power of two ``>= 2N`` (at least 64), keeping a few near-field neighbours per node."""
    return max(64, 1 << math.ceil(math.log2(max(2 * N, 1))))


def _hermite_poly(kernel: PeriodicKernel, p: int, eps: float) -> np.ndarray:
    # odd (cot) or even (log sin) polynomial in t = x/eps matching p derivatives at t = 1;
    # parity makes the conditions at t = -1 hold automatically.
    offset = 1 if kernel.parity == "odd" else 0
    expo = offset + 2 * np.arange(p)
    V = np.empty((p, p))
    rhs = np.empty(p)
    for d in range(p):
        V[d] = [math.perm(int(e), d) for e in expo]
        rhs[d] = eps**d * kernel.derivative(eps, d)
    c = np.linalg.solve(V, rhs)
    poly = np.zeros(2 * p)
    poly[expo] = c
    return poly


def fastsum_plan(kernel, n: int, p: int = 10, eps_I: float | None = None, *,
                 inner_sigma: float = 2.0, inner_m: int | None = None) -> FastsumPlan:
    """Precompute the regularized kernel and its ``n`` Fourier coefficients.

    ``eps_I`` defaults to ``2p/n``; the inner NFFTs use a Kaiser-Bessel window
    with oversampling ``inner_sigma`` and cut-off ``inner_m`` (default ``p``,
    but at least 4).
    """
    kernel = kernel if isinstance(kernel, PeriodicKernel) else PeriodicKernel(kernel)
    if int(n) != n or n < 4 or n % 2:
        raise InvalidParameter(f"expansion size n must be an even integer >= 4, got {n}")
    if int(p) != p or not 1 <= p <= 12:
        raise InvalidParameter(f"smoothness p must be in 1..12, got {p}")
    if eps_I is None:
        eps_I = 2 * p / n
    if not 0 < eps_I < 0.5:
        raise InvalidParameter(f"eps_I must lie in (0, 1/2), got {eps_I}")
    if eps_I < p / n:
        raise InvalidParameter(f"eps_I={eps_I} is smaller than p/n={p / n}")
    inner_m = max(4, p) if inner_m is None else inner_m

    poly = _hermite_poly(kernel, p, eps_I)
    plan = FastsumPlan(kernel, int(n), int(p), float(eps_I), np.empty(0), poly,
                       inner_sigma=inner_sigma, inner_m=int(inner_m))
    samples = plan.regularized(frequencies(n) / n)
    coeffs = scipy.fft.fftshift(scipy.fft.fft(scipy.fft.ifftshift(samples), workers=fft_workers())) / n
    # drop the unpaired Nyquist term so the series keeps the kernel's symmetry
    coeffs[0] = 0.0
    if kernel.parity == "odd":
        coeffs = 1j * coeffs.imag
    else:
        coeffs = coeffs.real.astype(complex)
    coeffs.setflags(write=False)
    object.__setattr__(plan, "coeffs", coeffs)
    return plan


def _near_pairs(targets: np.ndarray, sources: np.ndarray, eps: float):
    """Pairs ``(l, j)`` with wrapped distance ``|x_l - y_j| < eps``; returns (l, j, x_l - y_j wrapped)."""
    order = np.argsort(sources, kind="stable")
    ys = sources[order]
    tl, sj, dist = [], [], []
    for shift in (-1.0, 0.0, 1.0):
        lo = np.searchsorted(ys, targets - eps - shift, side="right")
        hi = np.searchsorted(ys, targets + eps - shift, side="left")
        counts = np.maximum(hi - lo, 0)
        if not counts.any():
            continue
        rows = np.repeat(np.arange(targets.size), counts)
        starts = np.repeat(lo - np.cumsum(counts) + counts, counts)
        cols = starts + np.arange(rows.size)
        tl.append(rows)
        sj.append(order[cols])
        dist.append(targets[rows] - (ys[cols] + shift))
    if not tl:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, np.empty(0)
    return np.concatenate(tl), np.concatenate(sj), np.concatenate(dist)


def fastsum_apply(plan: FastsumPlan, sources: NodeSet, alpha, targets: NodeSet, *,
                  exclude_self: bool = False) -> np.ndarray:
    """``g_l = sum_j alpha_j K(x_l - y_j)`` for all targets ``x_l``.

    With ``exclude_self`` pairs at distance exactly zero are skipped (their
    singular term is left out of the sum) instead of raising ``CoincidentNodes``.
    """
    y = sources.points
    x = targets.points
    alpha = np.asarray(alpha)
    if alpha.shape != y.shape:
        raise DimensionMismatch(f"need {y.size} weights, got {alpha.shape}")
    alpha = alpha.astype(complex)

    cfg = plan.inner_config()
    far = nfft_forward(plan_build(cfg, targets),
                       plan.coeffs * nfft_adjoint(plan_build(cfg, sources), alpha))

    rows, cols, d = _near_pairs(x, y, plan.eps_I)
    zero = d == 0
    if zero.any() and not exclude_self:
        raise CoincidentNodes(f"{int(zero.sum())} target(s) coincide with a source")
    corr = np.empty(d.shape)
    nz = ~zero
    corr[nz] = plan.kernel(d[nz]) - P.polyval(d[nz] / plan.eps_I, plan.poly)
    corr[zero] = -plan.poly[0]
    w = corr * alpha[cols]
    near = np.bincount(rows, w.real, minlength=x.size) + 1j * np.bincount(rows, w.imag, minlength=x.size)
    return far + near


def fastsum_direct(kernel, sources: NodeSet, alpha, targets: NodeSet, *,
                   exclude_self: bool = False) -> np.ndarray:
    """O(N^2) reference for ``fastsum_apply``."""
    kernel = kernel if isinstance(kernel, PeriodicKernel) else PeriodicKernel(kernel)
    diff = targets.points[:, None] - sources.points[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        Kmat = kernel(diff)
    zero = diff == 0
    if zero.any():
        if not exclude_self:
            raise CoincidentNodes("a target coincides with a source")
        Kmat[zero] = 0.0
    return Kmat @ np.asarray(alpha, dtype=complex)
