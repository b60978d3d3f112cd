"""Frame view of the adjoint NFFT and its link to the optimized spreading matrices.

With ``phi_j(k) = exp(-2 pi i k x_j)`` and
``psi_l(k) = exp(-2 pi i k l / M_sigma) / (M_sigma w_hat(-k))`` the truncated
cross-Gram matrix is ``Phi[j, l] = conj(K(x_j - l/M_sigma))``.  The adjoint NFFT
reads ``h~ = Psi c`` with ``c = B^* f``; the frame approximation reads
``h~~ = Psi d`` with ``d = pinv(Phi) f``.

The identities

    Phi B^* = (conj(B) F D A^*)^T,      B^* Phi = (F D A^* conj(B))^T

reduce, for real ``B``, to ``Phi B^* = (B F D A^*)^T`` and ``B^* Phi = (F D A^* B)^T``,
which is why minimizing ``||Phi B^* - I||`` or ``||B^* Phi - I||`` is the same
column-wise least-squares problem as in :mod:`infft.rect`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, InvalidParameter
from .nfft import NfftPlan, check_dense, fourier_matrix, nfft_adjoint, nfft_matrix, spread_matrix
from .nodes import NodeSet
from .rect import KernelEvaluator, OptimizedSpreadMatrix
from .windows import KernelConvention, WindowConfig, frequencies, kernel_coefficients

__all__ = [
    "FrameSystem",
    "frame_system",
    "assemble_phi",
    "assemble_psi",
    "pinv",
    "frame_coefficients",
    "frame_reconstruction",
    "adjoint_as_frame",
    "theorem_bound_check",
    "transpose_identity_check",
    "admissibility_condition",
]


def assemble_phi(cfg: WindowConfig, nodes: NodeSet, convention=KernelConvention.WINDOW) -> np.ndarray:
    """``Phi[j, l] = conj(K(x_j - l/M_sigma))``, shape ``(N, M_sigma)``, by direct summation."""
    n = cfg.M_sigma
    check_dense(nodes.N, n, "frame matrix Phi")
    ev = KernelEvaluator(cfg, convention, method="direct")
    return np.conj(ev(nodes.points[:, None] - frequencies(n)[None, :] / n))


def assemble_psi(cfg: WindowConfig, convention=KernelConvention.WINDOW) -> np.ndarray:
    """``Psi[k, l] = psi_l(k)``, shape ``(M, M_sigma)``."""
    n = cfg.M_sigma
    check_dense(cfg.M, n, "frame matrix Psi")
    coef = kernel_coefficients(cfg, convention, sign=-1)
    return coef[:, None] * fourier_matrix(cfg.M, n).conj().T


def pinv(a: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse from a dense SVD.

    Singular values below ``rtol * s_max`` count as zero; ``rtol`` defaults to
    ``max(a.shape) * eps``.
    """
    U, s, Vh = np.linalg.svd(a, full_matrices=False)
    if rtol is None:
        rtol = max(a.shape) * np.finfo(float).eps
    keep = s > rtol * (s[0] if s.size else 0.0)
    return (Vh[keep].conj().T / s[keep]) @ U[:, keep].conj().T


@dataclass(frozen=True, eq=False)
class FrameSystem:
    cfg: WindowConfig
    nodes: NodeSet
    convention: KernelConvention
    phi: np.ndarray
    psi: np.ndarray
    rtol: float | None = None

    @property
    def N(self) -> int:
        return self.nodes.N

    @property
    def M_sigma(self) -> int:
        return self.cfg.M_sigma

    @property
    def w_hat_inverse(self) -> np.ndarray:
        """The vector ``(1 / w_hat(-k))_k`` (zero where the convention drops a term)."""
        return self.cfg.M_sigma * kernel_coefficients(self.cfg, self.convention, sign=-1)

    def phi_pinv(self) -> np.ndarray:
        # pseudoinverse tolerance: s_max * M_sigma * eps
        rtol = self.M_sigma * np.finfo(float).eps if self.rtol is None else self.rtol
        return pinv(self.phi, rtol)


def frame_system(cfg: WindowConfig, nodes: NodeSet, convention=KernelConvention.WINDOW,
                 rtol: float | None = None) -> FrameSystem:
    convention = KernelConvention(convention)
    return FrameSystem(cfg, nodes, convention, assemble_phi(cfg, nodes, convention),
                       assemble_psi(cfg, convention), rtol)


def frame_coefficients(frame: FrameSystem, f) -> np.ndarray:
    """``d = pinv(Phi) f``."""
    f = np.asarray(f)
    if f.shape[0] != frame.N:
        raise DimensionMismatch(f"expected {frame.N} samples, got {f.shape[0]}")
    return frame.phi_pinv() @ f


def frame_reconstruction(frame: FrameSystem, d) -> np.ndarray:
    """``h~~_k = sum_l d_l psi_l(k)``."""
    d = np.asarray(d)
    if d.shape[0] != frame.M_sigma:
        raise DimensionMismatch(f"expected {frame.M_sigma} coefficients, got {d.shape[0]}")
    return frame.psi @ d


def adjoint_as_frame(plan: NfftPlan, f, *, check: bool = True):
    """Adjoint NFFT written as a frame expansion: ``c = B^* f`` and ``h~ = Psi c``.

    With ``check`` the result is compared against :func:`nfft_adjoint` and an
    ``ArithmeticError`` is raised if they differ by more than ``1e-12`` (relative).
    """
    f = np.asarray(f)
    c = plan.B.conj().T @ f
    h = assemble_psi(plan.cfg) @ c
    if check:
        ref = nfft_adjoint(plan, f)
        scale = max(1.0, float(np.max(np.abs(ref), initial=0.0)))
        if np.max(np.abs(h - ref), initial=0.0) > 1e-12 * scale:
            raise ArithmeticError("frame form of the adjoint NFFT disagrees with nfft_adjoint")
    return c, h


def _dense_B(frame_or_cfg, nodes, B):
    if B is None:
        return spread_matrix(frame_or_cfg, nodes).toarray()
    if isinstance(B, OptimizedSpreadMatrix):
        return B.B.toarray()
    if isinstance(B, NfftPlan):
        return B.B.toarray()
    return B.toarray() if sp.issparse(B) else np.asarray(B)


def theorem_bound_check(frame: FrameSystem, plan: NfftPlan, f, side: str | None = None, B=None):
    """Both sides of the distance estimate between ``Psi B^* f`` and ``Psi pinv(Phi) f``.

    ``lhs = ||h~ - h~~||_2`` and
    ``rhs = ||w_hat^{-1}||_2 / sqrt(M_sigma) * ||E||_F * ||pinv(Phi) f||_2``
    with ``E = Phi B^* - I_N`` for ``side="N"`` (``M_sigma < N``) or
    ``E = B^* Phi - I_{M_sigma}`` for ``side="M"`` (``M_sigma > N``).
    ``side=None`` picks the one matching the dimensions.  ``B`` overrides the
    plan's spreading matrix.
    """
    N, n = frame.N, frame.M_sigma
    if n == N:
        raise DimensionMismatch("the estimate needs M_sigma != N")
    expected = "N" if n < N else "M"
    side = expected if side is None else side
    if side not in ("N", "M"):
        raise InvalidParameter(f"side must be 'N' or 'M', got {side!r}")
    if side != expected:
        raise DimensionMismatch(f"side {side!r} does not match N={N}, M_sigma={n}")
    Bd = _dense_B(frame.cfg, frame.nodes, plan if B is None else B)
    Bs = Bd.conj().T
    f = np.asarray(f, dtype=complex)
    c = Bs @ f
    d = frame.phi_pinv() @ f
    lhs = float(np.linalg.norm(frame.psi @ (c - d)))
    E = frame.phi @ Bs - np.eye(N) if side == "N" else Bs @ frame.phi - np.eye(n)
    rhs = (np.linalg.norm(frame.w_hat_inverse) / np.sqrt(n)
           * np.linalg.norm(E) * np.linalg.norm(d))
    return lhs, float(rhs)


def transpose_identity_check(cfg: WindowConfig, nodes: NodeSet, B=None,
                             convention=KernelConvention.WINDOW) -> float:
    """Largest entrywise deviation in the two transpose identities.

    Compares ``Phi B^*`` with ``(conj(B) F D A^*)^T`` and ``B^* Phi`` with
    ``(F D A^* conj(B))^T``; for real ``B`` these are the usual forms.
    """
    convention = KernelConvention(convention)
    N, M, n = nodes.N, cfg.M, cfg.M_sigma
    check_dense(max(N, n), max(N, n), "transpose identity")
    Bd = _dense_B(cfg, nodes, B)
    phi = assemble_phi(cfg, nodes, convention)
    A = nfft_matrix(nodes, M)
    D = kernel_coefficients(cfg, convention, sign=+1)
    FDA = (fourier_matrix(M, n) * D) @ A.conj().T  # F D A^*, shape (M_sigma, N)
    Bc = np.conj(Bd)
    dev1 = np.abs(phi @ Bd.conj().T - (Bc @ FDA).T).max()
    dev2 = np.abs(Bd.conj().T @ phi - (FDA @ Bc).T).max()
    return float(max(dev1, dev2))


def admissibility_condition(N: int, M_sigma: int, c: float, s: float) -> bool:
    """Dimension condition ``N >= M_sigma + c * M_sigma^(1/(2s-1))`` (reported, never enforced)."""
    if s <= 0.5:
        raise InvalidParameter("smoothness s must exceed 1/2")
    return bool(N >= M_sigma + c * M_sigma ** (1.0 / (2 * s - 1)))
