"""Window functions, their Fourier transforms and the derived kernels.

All windows live on the oversampled grid of size ``n = M_sigma``; ``m`` is the
cut-off so that the truncated window is supported on ``[-m/n, m/n]``.
The shape parameters follow the usual NFFT conventions:

=============  ==========================================================  ===========================================
kind           w(x)                                                        w_hat(k)
=============  ==========================================================  ===========================================
bspline        M_2m(n x)  (centered cardinal B-spline of order 2m)         (1/n) sinc(pi k / n)^(2m)
gaussian       (pi b)^(-1/2) exp(-(n x)^2 / b),  b = 2 sigma m/((2 sigma-1) pi)   (1/n) exp(-b (pi k / n)^2)
kaiser_bessel  sinh(b sqrt(m^2 - n^2 x^2)) / (pi sqrt(m^2 - n^2 x^2)),      (1/n) I0(m sqrt(b^2 - (2 pi k / n)^2))
               b = pi (2 - 1/sigma)
sinc           (M(2 sigma-1)/(2m)) sinc^(2m)(pi M (2 sigma-1) x / (2m))    M_2m(2 m k / ((2 sigma-1) M))
=============  ==========================================================  ===========================================

with ``sinc(t) = sin(t)/t`` and ``sigma = n/M``.  For Kaiser-Bessel beyond
``|k| > n b / (2 pi)`` the transform continues as ``(1/n) J0(m sqrt((2 pi k/n)^2 - b^2))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special
from scipy.interpolate import BSpline

from .errors import InvalidParameter, UnsupportedIndex, ZeroWindowTransform

__all__ = [
    "WindowKind",
    "KernelConvention",
    "WindowConfig",
    "reduce_periodic",
    "window",
    "window_periodized",
    "window_hat",
    "dirichlet",
    "kernel_coefficients",
    "inverse_window_kernel",
]


class WindowKind(str, enum.Enum):
    BSPLINE = "bspline"
    GAUSSIAN = "gaussian"
    KAISER_BESSEL = "kaiser_bessel"
    SINC = "sinc"


class KernelConvention(str, enum.Enum):
    """Which Fourier weights define the inverse window kernel.

    ``WINDOW`` uses ``1/w_hat``; ``DIRICHLET`` replaces them by one on
    ``-M/2+1 .. M/2-1`` and drops the unmatched ``k = -M/2`` term, so the
    kernel becomes the Dirichlet kernel ``D_{M/2-1}(x) / M_sigma``.
    """

    WINDOW = "window"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class WindowConfig:
    kind: WindowKind
    m: int
    M: int
    sigma: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", WindowKind(self.kind))
        if int(self.M) != self.M or self.M <= 0 or self.M % 2:
            raise InvalidParameter(f"M must be an even positive integer, got {self.M}")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParameter(f"cut-off m must be a positive integer, got {self.m}")
        if not self.sigma >= 1.0:
            raise InvalidParameter(f"oversampling sigma must be >= 1, got {self.sigma}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "sigma", float(self.sigma))
        if 2 * self.m + 1 > self.M_sigma:
            raise InvalidParameter(
                f"window support 2m+1={2 * self.m + 1} exceeds grid size {self.M_sigma}"
            )

    @property
    def M_sigma(self) -> int:
        """Oversampled grid size, ``sigma * M`` rounded to the nearest even integer."""
        return 2 * int(round(self.sigma * self.M / 2))

    @property
    def shape(self) -> float:
        """The kind-specific shape parameter ``b`` (``nan`` for the B-spline)."""
        s = self.M_sigma / self.M
        if self.kind is WindowKind.GAUSSIAN:
            return 2 * s * self.m / ((2 * s - 1) * np.pi)
        if self.kind is WindowKind.KAISER_BESSEL:
            return np.pi * (2 - 1 / s)
        return np.nan

    def replace(self, **changes) -> "WindowConfig":
        fields = dict(kind=self.kind, m=self.m, M=self.M, sigma=self.sigma)
        fields.update(changes)
        return WindowConfig(**fields)


def reduce_periodic(x):
    """Map ``x`` into ``[-1/2, 1/2)`` modulo one (ties go to ``-1/2``)."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x + 0.5)
    # x + 0.5 can round up to an integer for x just below a half-integer
    r = np.where(r < -0.5, r + 1.0, r)
    return np.where(r >= 0.5, r - 1.0, r)


@lru_cache(maxsize=32)
def _cardinal_bspline(order: int) -> BSpline:
    half = order // 2
    return BSpline.basis_element(np.arange(-half, half + 1, dtype=float), extrapolate=False)


def _bspline_centered(order, t):
    t = np.asarray(t, dtype=float)
    out = _cardinal_bspline(order)(t)
    return np.nan_to_num(out, nan=0.0)


def _sinc(t):
    # np.sinc is the normalized sinc; ours is sin(t)/t
    return np.sinc(np.asarray(t) / np.pi)


def window(cfg: WindowConfig, x):
    """Untruncated window ``w(x)`` on the real line (vectorized)."""
    x = np.asarray(x, dtype=float)
    n, m = cfg.M_sigma, cfg.m
    if cfg.kind is WindowKind.BSPLINE:
        return _bspline_centered(2 * m, n * x)
    if cfg.kind is WindowKind.GAUSSIAN:
        b = cfg.shape
        return np.exp(-((n * x) ** 2) / b) / np.sqrt(np.pi * b)
    if cfg.kind is WindowKind.KAISER_BESSEL:
        b = cfg.shape
        t = m * m - (n * x) ** 2
        out = np.full_like(t, b / np.pi)
        pos, neg = t > 0, t < 0
        r = np.sqrt(t[pos])
        out[pos] = np.sinh(b * r) / (np.pi * r)
        r = np.sqrt(-t[neg])
        out[neg] = np.sin(b * r) / (np.pi * r)
        return out
    s = n / cfg.M
    c = cfg.M * (2 * s - 1) / (2 * m)
    return c * _sinc(np.pi * c * x) ** (2 * m)


def window_periodized(cfg: WindowConfig, x):
    """The 1-periodic truncated window ``sum_r w_m(x + r)``.

    Exactly zero whenever the distance of ``x`` to the integers exceeds ``m/M_sigma``.
    Since ``2m+1 <= M_sigma`` at most one translate is nonzero.
    """
    r = reduce_periodic(x)
    out = np.zeros_like(r)
    inside = np.abs(r) <= cfg.m / cfg.M_sigma
    out[inside] = window(cfg, r[inside])
    return out if out.ndim else float(out)


def _window_hat_raw(cfg: WindowConfig, k):
    k = np.asarray(k, dtype=float)
    n, m = cfg.M_sigma, cfg.m
    if cfg.kind is WindowKind.BSPLINE:
        return _sinc(np.pi * k / n) ** (2 * m) / n
    if cfg.kind is WindowKind.GAUSSIAN:
        return np.exp(-cfg.shape * (np.pi * k / n) ** 2) / n
    if cfg.kind is WindowKind.KAISER_BESSEL:
        b = cfg.shape
        t = b * b - (2 * np.pi * k / n) ** 2
        out = np.empty_like(t)
        pos = t >= 0
        out[pos] = special.i0(m * np.sqrt(t[pos])) / n
        out[~pos] = special.j0(m * np.sqrt(-t[~pos])) / n
        return out
    s = n / cfg.M
    return _bspline_centered(2 * m, 2 * m * k / ((2 * s - 1) * cfg.M))


def window_hat(cfg: WindowConfig, k):
    """Closed-form Fourier transform ``w_hat(k)`` for integer ``|k| <= M_sigma/2``."""
    k_arr = np.asarray(k)
    if np.any(np.abs(k_arr) > cfg.M_sigma // 2):
        raise UnsupportedIndex(f"|k| must not exceed M_sigma/2 = {cfg.M_sigma // 2}")
    out = _window_hat_raw(cfg, k_arr)
    return out if out.ndim else float(out)


def dirichlet(M: int, x):
    """Dirichlet kernel ``D_{M/2-1}(x) = sin((M-1) pi x) / sin(pi x)``, equal to ``M-1`` on the integers."""
    if M < 2:
        raise InvalidParameter("dirichlet kernel needs M >= 2")
    r = reduce_periodic(x)
    den = np.sin(np.pi * r)
    out = np.full_like(r, float(M - 1))
    nz = den != 0
    out[nz] = np.sin((M - 1) * np.pi * r[nz]) / den[nz]
    return out if out.ndim else float(out)


def frequencies(M: int) -> np.ndarray:
    return np.arange(-M // 2, M // 2)


def kernel_coefficients(cfg: WindowConfig, convention=KernelConvention.WINDOW, sign: int = -1):
    """Fourier weights ``1/(M_sigma w_hat(sign*k))`` for ``k = -M/2 .. M/2-1``.

    ``sign=-1`` gives the coefficients of the inverse window kernel ``K``;
    ``sign=+1`` gives the diagonal of the deconvolution matrix ``D``.
    Under the Dirichlet convention both are ``1/M_sigma`` with the ``k=-M/2``
    entry set to zero.
    """
    convention = KernelConvention(convention)
    k = frequencies(cfg.M)
    if convention is KernelConvention.DIRICHLET:
        out = np.full(cfg.M, 1.0 / cfg.M_sigma)
        out[0] = 0.0
        return out
    what = window_hat(cfg, sign * k)
    if np.any(what == 0):
        bad = k[what == 0]
        raise ZeroWindowTransform(f"w_hat vanishes at k = {bad.tolist()}")
    return 1.0 / (cfg.M_sigma * what)


def inverse_window_kernel(cfg: WindowConfig, x, convention=KernelConvention.WINDOW):
    """Inverse window kernel ``K(x) = (1/M_sigma) sum_k e^{2 pi i k x} / w_hat(-k)``.

    Evaluated by direct ``M``-term summation; under the Dirichlet convention
    the closed form ``D_{M/2-1}(x) / M_sigma`` is returned instead (real).
    """
    convention = KernelConvention(convention)
    x = np.asarray(x, dtype=float)
    if convention is KernelConvention.DIRICHLET:
        out = dirichlet(cfg.M, x) / cfg.M_sigma
        return np.asarray(out) if x.ndim else float(out)
    coef = kernel_coefficients(cfg, convention, sign=-1)
    k = frequencies(cfg.M)
    flat = reduce_periodic(x).ravel()
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, 2**20 // cfg.M)
    for start in range(0, flat.size, step):
        chunk = flat[start : start + step]
        out[start : start + step] = np.exp(2j * np.pi * np.outer(chunk, k)) @ coef
    out = out.reshape(x.shape)
    return out if x.ndim else complex(out)
