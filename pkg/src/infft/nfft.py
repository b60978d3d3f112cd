"""Nonequispaced FFT in one dimension.

The transform matrix ``A = (exp(2 pi i k x_j))`` with ``k = -M/2 .. M/2-1`` is
factored as ``A ~ B F D`` where

* ``D = diag(1 / (M_sigma w_hat(k)))`` (the ``1/M_sigma`` lives here, not in ``F``),
* ``F = (exp(2 pi i k l / M_sigma))`` with ``l = -M_sigma/2 .. M_sigma/2-1``,
* ``B = (w~_m(x_j - l/M_sigma))`` is ``(2m+1)``-sparse per row.

``nfft_forward`` applies ``B F D`` and ``nfft_adjoint`` applies ``D* F* B*``;
the two are exact adjoints of each other regardless of window accuracy.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.sparse as sp

from .errors import DimensionMismatch, SizeLimitExceeded
from .nodes import NodeSet
from .windows import (
    KernelConvention,
    WindowConfig,
    frequencies,
    kernel_coefficients,
    window,
)

__all__ = [
    "DENSE_LIMIT",
    "NfftPlan",
    "nfft_matrix",
    "ndft_forward",
    "ndft_adjoint",
    "build_index_set_node",
    "build_index_set_grid",
    "spread_matrix",
    "plan_build",
    "nfft_forward",
    "nfft_adjoint",
    "to_grid",
    "from_grid",
    "fourier_matrix",
]

#: Largest number of entries a dense oracle matrix may have.
DENSE_LIMIT = 2**24


def fft_workers() -> int:
    try:
        return max(1, int(os.environ.get("INFFT_THREADS", "1")))
    except ValueError:
        return 1


def check_dense(rows: int, cols: int, what: str = "dense matrix") -> None:
    if rows * cols > DENSE_LIMIT:
        raise SizeLimitExceeded(
            f"{what} of size {rows}x{cols} exceeds the desk-scale limit of {DENSE_LIMIT} entries"
        )


def _points(nodes):
    if isinstance(nodes, NodeSet):
        return nodes.points
    return np.asarray(nodes, dtype=float).ravel()


# ---------------------------------------------------------------------------
# dense oracles
# ---------------------------------------------------------------------------


def nfft_matrix(nodes, M: int) -> np.ndarray:
    """Dense nonequispaced Fourier matrix ``A`` of shape ``(N, M)``."""
    x = _points(nodes)
    check_dense(x.size, M, "nonequispaced Fourier matrix")
    return np.exp(2j * np.pi * np.outer(x, frequencies(M)))


def fourier_matrix(M: int, M_sigma: int) -> np.ndarray:
    """Truncated Fourier matrix ``F`` of shape ``(M_sigma, M)``."""
    check_dense(M_sigma, M, "truncated Fourier matrix")
    l = frequencies(M_sigma)
    return np.exp(2j * np.pi * np.outer(l, frequencies(M)) / M_sigma)


def ndft_forward(nodes, fhat) -> np.ndarray:
    """``f_j = sum_k fhat_k exp(2 pi i k x_j)`` by direct summation."""
    fhat = np.asarray(fhat)
    return nfft_matrix(nodes, fhat.shape[0]) @ fhat


def ndft_adjoint(nodes, f, M: int) -> np.ndarray:
    """``h_k = sum_j f_j exp(-2 pi i k x_j)`` by direct summation."""
    x = _points(nodes)
    f = np.asarray(f)
    if f.shape[0] != x.size:
        raise DimensionMismatch(f"expected {x.size} samples, got {f.shape[0]}")
    return nfft_matrix(x, M).conj().T @ f


# ---------------------------------------------------------------------------
# index sets
# ---------------------------------------------------------------------------


def _unwrapped_range(x, M_sigma, m):
    # integers u with -m <= M_sigma x - u <= m
    t = M_sigma * np.asarray(x, dtype=float)
    return np.ceil(t - m).astype(np.int64), np.floor(t + m).astype(np.int64)


def _wrap_grid(u, M_sigma):
    return (u + M_sigma // 2) % M_sigma - M_sigma // 2


def build_index_set_node(x: float, M_sigma: int, m: int) -> np.ndarray:
    """Grid indices ``l`` in ``-M_sigma/2 .. M_sigma/2-1`` within reach of node ``x`` (sorted)."""
    lo, hi = _unwrapped_range(x, M_sigma, m)
    return np.sort(_wrap_grid(np.arange(lo, hi + 1), M_sigma))


def build_index_set_grid(l: int, nodes, M_sigma: int, m: int) -> np.ndarray:
    """Node indices ``j`` (0-based) whose index set contains grid point ``l`` (sorted)."""
    lo, hi = _unwrapped_range(_points(nodes), M_sigma, m)
    hit = np.zeros(lo.shape, dtype=bool)
    for z in (-1, 0, 1):
        u = l + z * M_sigma
        hit |= (lo <= u) & (u <= hi)
    return np.flatnonzero(hit)


def spread_matrix(cfg: WindowConfig, nodes) -> sp.csr_matrix:
    """Sparse ``B`` with entries ``w~_m(x_j - l/M_sigma)``, shape ``(N, M_sigma)``."""
    x = _points(nodes)
    n, m = cfg.M_sigma, cfg.m
    lo, hi = _unwrapped_range(x, n, m)
    u = lo[:, None] + np.arange(2 * m + 1)[None, :]
    valid = u <= hi[:, None]
    rows = np.broadcast_to(np.arange(x.size)[:, None], u.shape)[valid]
    u = u[valid]
    vals = window(cfg, x[rows] - u / n)
    return sp.csr_matrix((vals, (rows, _wrap_grid(u, n) + n // 2)), shape=(x.size, n))


# ---------------------------------------------------------------------------
# grid transforms (the F step)
# ---------------------------------------------------------------------------


def to_grid(ghat, M_sigma: int) -> np.ndarray:
    """``g_l = sum_k ghat_k exp(2 pi i k l / M_sigma)`` for centered ``ghat`` of even length ``M``."""
    ghat = np.asarray(ghat)
    M = ghat.shape[0]
    full = np.zeros((M_sigma,) + ghat.shape[1:], dtype=complex)
    full[M_sigma // 2 - M // 2 : M_sigma // 2 + M // 2] = ghat
    out = scipy.fft.ifft(scipy.fft.ifftshift(full, axes=0), axis=0, norm="forward",
                         workers=fft_workers())
    return scipy.fft.fftshift(out, axes=0)


def from_grid(g, M: int) -> np.ndarray:
    """``ghat_k = sum_l g_l exp(-2 pi i k l / M_sigma)`` for ``k = -M/2 .. M/2-1``."""
    g = np.asarray(g)
    n = g.shape[0]
    full = scipy.fft.fftshift(
        scipy.fft.fft(scipy.fft.ifftshift(g, axes=0), axis=0, workers=fft_workers()), axes=0
    )
    return full[n // 2 - M // 2 : n // 2 + M // 2]


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NfftPlan:
    """Precomputed ``D`` diagonal and sparse ``B`` for fixed nodes."""

    cfg: WindowConfig
    nodes: NodeSet
    D: np.ndarray
    B: sp.csr_matrix

    @property
    def N(self) -> int:
        return self.nodes.N

    @property
    def M(self) -> int:
        return self.cfg.M

    @property
    def M_sigma(self) -> int:
        return self.cfg.M_sigma

    def row_nnz(self) -> np.ndarray:
        return np.diff(self.B.indptr)


def plan_build(cfg: WindowConfig, nodes: NodeSet) -> NfftPlan:
    D = kernel_coefficients(cfg, KernelConvention.WINDOW, sign=+1)
    D.setflags(write=False)
    return NfftPlan(cfg=cfg, nodes=nodes, D=D, B=spread_matrix(cfg, nodes))


def nfft_forward(plan: NfftPlan, fhat) -> np.ndarray:
    """Approximate ``A fhat`` as ``B F D fhat``."""
    fhat = np.asarray(fhat)
    if fhat.shape[0] != plan.M:
        raise DimensionMismatch(f"expected {plan.M} coefficients, got {fhat.shape[0]}")
    scale = plan.D.reshape((-1,) + (1,) * (fhat.ndim - 1))
    return plan.B @ to_grid(scale * fhat, plan.M_sigma)


def nfft_adjoint(plan: NfftPlan, f) -> np.ndarray:
    """Approximate ``A* f`` as ``D* F* B* f``."""
    f = np.asarray(f)
    if f.shape[0] != plan.N:
        raise DimensionMismatch(f"expected {plan.N} samples, got {f.shape[0]}")
    scale = plan.D.conj().reshape((-1,) + (1,) * (f.ndim - 1))
    return scale * from_grid(plan.B.T @ f, plan.M)
