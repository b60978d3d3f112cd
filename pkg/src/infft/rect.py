"""Direct inverses for the rectangular case by optimizing the sparse matrix ``B``.

Two column-separable least-squares problems replace the window entries of
``B`` while keeping its sparsity pattern:

* ``optimize_B_star`` minimizes ``||A D^* F^* B^* - M I_N||_F``.  Column ``j`` of
  ``B^*`` lives on ``I(x_j)`` and solves ``min ||K_j b - M e_j||`` where ``K_j``
  holds the columns ``l in I(x_j)`` of ``K = A D^* F^*``, i.e. the values
  ``K(x_h - l/M_sigma)`` of the inverse window kernel.  Suited to ``N < M``.
* ``optimize_B`` minimizes ``||F D A^* B - I||_F``.  Column ``l`` of ``B`` lives on
  the nodes ``I(l)`` near grid point ``l`` and solves ``min ||L_l b - e_l||``
  with ``L_l`` the columns ``j in I(l)`` of ``K^*``.  Suited to ``N > M``.

The optimized matrix is then used inside an ordinary (adjoint) NFFT, so
applying the inverse costs ``O(M_sigma log M_sigma + N m)``.

Least-squares solutions are complex in general; ``B_opt`` is stored as a
complex sparse matrix.  ``D`` follows the chosen :class:`KernelConvention` for
both the optimization and the application.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import DimensionMismatch, EmptyColumn, InvalidParameter, RankDeficientColumn
from .nfft import (
    NfftPlan,
    _unwrapped_range,
    _wrap_grid,
    build_index_set_grid,
    build_index_set_node,
    check_dense,
    fourier_matrix,
    from_grid,
    nfft_forward,
    nfft_matrix,
    plan_build,
    spread_matrix,
    to_grid,
)
from .nodes import NodeSet
from .windows import (
    KernelConvention,
    WindowConfig,
    WindowKind,
    dirichlet,
    frequencies,
    kernel_coefficients,
    reduce_periodic,
)

__all__ = [
    "KernelEvaluator",
    "ColumnSystem",
    "OptimizedSpreadMatrix",
    "assemble_Kj",
    "assemble_Ll",
    "solve_column",
    "optimize_B_star",
    "optimize_B",
    "apply_inverse_underdetermined",
    "apply_inverse_overdetermined",
    "apply_inverse_adjoint_under",
    "apply_inverse_adjoint_over",
    "frobenius_deviation",
    "deviation_matrix",
    "save_json",
    "load_json",
    "save_npz",
    "load_npz",
]

FORMAT_VERSION = 1

# direct summation is used while (#points) * M stays below this
_DIRECT_WORK = 2**25


# ---------------------------------------------------------------------------
# kernel evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelEvaluator:
    """Evaluates ``K(x) = sum_k conj(D_k) exp(2 pi i k x)`` at many points.

    ``method`` is ``"direct"`` (``M``-term sums), ``"nfft"`` (one NFFT with a
    Kaiser-Bessel window, oversampling ``sigma2`` and cut-off ``m2``, default
    ``2m``) or ``"auto"``.  The Dirichlet convention always uses the closed form.
    """

    cfg: WindowConfig
    convention: KernelConvention = KernelConvention.WINDOW
    method: str = "auto"
    sigma2: float = 2.0
    m2: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "convention", KernelConvention(self.convention))
        if self.method not in ("auto", "direct", "nfft"):
            raise InvalidParameter(f"unknown kernel evaluation method {self.method!r}")

    @property
    def coefficients(self) -> np.ndarray:
        return np.conj(kernel_coefficients(self.cfg, self.convention, sign=+1))

    def inner_config(self) -> WindowConfig:
        m2 = 2 * self.cfg.m if self.m2 is None else self.m2
        return WindowConfig(WindowKind.KAISER_BESSEL, m2, self.cfg.M, self.sigma2)

    def resolved_method(self, npoints: int) -> str:
        if self.convention is KernelConvention.DIRICHLET:
            return "closed_form"
        if self.method != "auto":
            return self.method
        return "direct" if npoints * self.cfg.M <= _DIRECT_WORK else "nfft"

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = reduce_periodic(x).ravel()
        how = self.resolved_method(flat.size)
        if how == "closed_form":
            out = dirichlet(self.cfg.M, flat) / self.cfg.M_sigma + 0j
        elif how == "direct":
            coef = self.coefficients
            k = frequencies(self.cfg.M)
            out = np.empty(flat.size, dtype=complex)
            step = max(1, 2**20 // self.cfg.M)
            for s in range(0, flat.size, step):
                out[s : s + step] = np.exp(2j * np.pi * np.outer(flat[s : s + step], k)) @ coef
        else:
            plan = plan_build(self.inner_config(), NodeSet(flat))
            out = nfft_forward(plan, self.coefficients)
        return out.reshape(x.shape)

    def provenance(self) -> dict:
        d = {"convention": self.convention.value, "method": self.method}
        if self.convention is KernelConvention.WINDOW:
            inner = self.inner_config()
            d.update(sigma2=inner.sigma, m2=inner.m)
        return d


def _evaluator(cfg, convention, evaluator):
    if evaluator is None:
        return KernelEvaluator(cfg, convention)
    if evaluator.cfg != cfg or evaluator.convention != KernelConvention(convention):
        raise InvalidParameter("evaluator was built for a different configuration")
    return evaluator


# ---------------------------------------------------------------------------
# column systems
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ColumnSystem:
    """One small least-squares problem ``min ||matrix @ b - rhs||``.

    ``support`` lists the unknowns: grid indices ``l`` for a ``K_j`` system,
    node indices ``j`` for an ``L_l`` system.
    """

    column: int
    matrix: np.ndarray
    rhs: np.ndarray
    support: np.ndarray
    rank: int | None = None
    residual: float | None = None


def assemble_Kj(cfg: WindowConfig, nodes: NodeSet, j: int, convention=KernelConvention.WINDOW,
                *, target_scale: float | None = None, evaluator: KernelEvaluator | None = None) -> ColumnSystem:
    """``K_j[h, :] = K(x_h - l/M_sigma)`` for ``l in I(x_j)``; right-hand side ``M e_j``."""
    ev = _evaluator(cfg, convention, evaluator)
    x = nodes.points
    if not 0 <= j < x.size:
        raise InvalidParameter(f"node index {j} out of range")
    ls = build_index_set_node(x[j], cfg.M_sigma, cfg.m)
    Kj = ev(x[:, None] - ls[None, :] / cfg.M_sigma)
    rhs = np.zeros(x.size, dtype=complex)
    rhs[j] = cfg.M if target_scale is None else target_scale
    return ColumnSystem(j, Kj, rhs, ls)


def assemble_Ll(cfg: WindowConfig, nodes: NodeSet, l: int, convention=KernelConvention.WINDOW,
                *, evaluator: KernelEvaluator | None = None) -> ColumnSystem:
    """``L_l[s, :] = conj(K(x_j - s/M_sigma))`` for ``j in I(l)``; right-hand side ``e_l``.

    Raises :class:`EmptyColumn` when no node is within reach of grid point ``l``.
    """
    ev = _evaluator(cfg, convention, evaluator)
    n = cfg.M_sigma
    if not -n // 2 <= l < n // 2:
        raise InvalidParameter(f"grid index {l} out of range")
    js = build_index_set_grid(l, nodes, n, cfg.m)
    if js.size == 0:
        raise EmptyColumn(l)
    s = frequencies(n)
    Ll = np.conj(ev(nodes.points[None, js] - s[:, None] / n))
    rhs = np.zeros(n, dtype=complex)
    rhs[l + n // 2] = 1.0
    return ColumnSystem(l, Ll, rhs, js)


def solve_column(system: ColumnSystem, ridge: float | None = None) -> np.ndarray:
    """Least-squares solution by column-pivoted QR; fills ``rank`` and ``residual``.

    The rank is the number of pivots with ``|R_ii| > max(shape) * eps * |R_00|``.
    Without ``ridge`` a rank-deficient system raises :class:`RankDeficientColumn`;
    with ``ridge = lam`` the Tikhonov problem ``min ||K b - r||^2 + lam ||b||^2``
    is solved instead.
    """
    K, r = system.matrix, system.rhs
    ncols = K.shape[1]
    Q, R, piv = scipy.linalg.qr(K, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(K.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.count_nonzero(diag > tol))
    system.rank = rank
    if rank < ncols:
        if ridge is None:
            raise RankDeficientColumn(system.column, {"rank": rank, "ncols": ncols, "r_diag": diag})
        if ridge <= 0:
            raise InvalidParameter("ridge parameter must be positive")
        aug = np.vstack([K, np.sqrt(ridge) * np.eye(ncols)])
        rhs = np.concatenate([r, np.zeros(ncols)])
        Q, R, piv = scipy.linalg.qr(aug, mode="economic", pivoting=True)
        y = scipy.linalg.solve_triangular(R, Q.conj().T @ rhs)
    else:
        y = scipy.linalg.solve_triangular(R, Q.conj().T @ r)
    b = np.empty(ncols, dtype=complex)
    b[piv] = y
    system.residual = float(np.linalg.norm(K @ b - r))
    return b


# ---------------------------------------------------------------------------
# the optimized matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OptimizedSpreadMatrix:
    """A ``(2m+1)``-sparse replacement of ``B`` plus where it came from.

    ``B`` is always the ``N x M_sigma`` matrix in the orientation of the plain
    NFFT, so the inverse applies ``B^*`` exactly where the adjoint NFFT would.
    ``orientation`` records which side was optimized column by column:
    ``"BStar"`` (columns of ``B^*``, one per node) or ``"B"`` (columns of ``B``,
    one per grid point).
    """

    orientation: str
    B: sp.csr_matrix
    cfg: WindowConfig
    convention: KernelConvention
    target_scale: float
    provenance: dict = field(default_factory=dict)
    ranks: np.ndarray | None = None
    residuals: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.B.shape[0]

    @property
    def D(self) -> np.ndarray:
        return kernel_coefficients(self.cfg, self.convention, sign=+1)

    def columns(self):
        """Yield ``(column, support, values)`` in the optimized orientation."""
        mat = self.B.conj().T.tocsc() if self.orientation == "BStar" else self.B.tocsc()
        mat.sort_indices()
        offset = self.cfg.M_sigma // 2 if self.orientation == "BStar" else 0
        for c in range(mat.shape[1]):
            sl = slice(mat.indptr[c], mat.indptr[c + 1])
            col = c if self.orientation == "BStar" else c - self.cfg.M_sigma // 2
            yield col, mat.indices[sl] - offset, mat.data[sl]

    def max_column_nnz(self) -> int:
        mat = self.B.T.tocsr() if self.orientation == "B" else self.B
        return int(np.diff(mat.indptr).max(initial=0))


def _assemble(orientation, N, n, cols, sups, vals):
    if orientation == "BStar":
        # column j of B^* holds conj(B[j, I(x_j)])
        rows = np.concatenate([np.full(len(s), c) for c, s in zip(cols, sups)]) if cols else []
        cidx = np.concatenate([s + n // 2 for s in sups]) if cols else []
        data = np.concatenate([np.conj(v) for v in vals]) if cols else []
    else:
        rows = np.concatenate(sups) if cols else []
        cidx = np.concatenate([np.full(len(s), c + n // 2) for c, s in zip(cols, sups)]) if cols else []
        data = np.concatenate(vals) if cols else []
    B = sp.csr_matrix((np.asarray(data, dtype=complex), (np.asarray(rows, dtype=np.int64),
                       np.asarray(cidx, dtype=np.int64))), shape=(N, n))
    B.sum_duplicates()
    B.sort_indices()
    return B


def _block_size(rows, per_col, budget=2**22):
    return max(1, budget // max(1, rows * per_col))


def optimize_B_star(cfg: WindowConfig, nodes: NodeSet, convention=KernelConvention.WINDOW, *,
                    target_scale: float | None = None, ridge: float | None = None,
                    evaluator: KernelEvaluator | None = None) -> OptimizedSpreadMatrix:
    """Optimize the columns of ``B^*`` so that ``A D^* F^* B^*`` approximates ``target_scale * I_N``.

    ``target_scale`` defaults to ``M``; ``1`` gives the frame variant.
    Kernel values for a block of columns are evaluated in one pass over the
    union of their grid indices.
    """
    convention = KernelConvention(convention)
    ev = _evaluator(cfg, convention, evaluator)
    x = nodes.points
    N, n, m = x.size, cfg.M_sigma, cfg.m
    scale = float(cfg.M if target_scale is None else target_scale)
    cols, sups, vals = [], [], []
    ranks = np.zeros(N, dtype=np.int64)
    resid = np.zeros(N)
    block = _block_size(N, 2 * m + 1)
    for start in range(0, N, block):
        js = range(start, min(N, start + block))
        supports = [build_index_set_node(x[j], n, m) for j in js]
        union = np.unique(np.concatenate(supports))
        Kcols = ev(x[:, None] - union[None, :] / n)
        for j, ls in zip(js, supports):
            rhs = np.zeros(N, dtype=complex)
            rhs[j] = scale
            system = ColumnSystem(j, Kcols[:, np.searchsorted(union, ls)], rhs, ls)
            b = solve_column(system, ridge)
            cols.append(j)
            sups.append(ls)
            vals.append(b)
            ranks[j] = system.rank
            resid[j] = system.residual
    B = _assemble("BStar", N, n, cols, sups, vals)
    prov = {"algorithm": "optimize_B_star", **ev.provenance(), "ridge": ridge}
    return OptimizedSpreadMatrix("BStar", B, cfg, convention, scale, prov, ranks, resid)


def optimize_B(cfg: WindowConfig, nodes: NodeSet, convention=KernelConvention.WINDOW, *,
               ridge: float | None = None, on_empty: str = "raise",
               evaluator: KernelEvaluator | None = None) -> OptimizedSpreadMatrix:
    """Optimize the columns of ``B`` so that ``F D A^* B`` approximates ``I_{M_sigma}``.

    A grid point with no node in reach has nothing to optimize; ``on_empty``
    either raises :class:`EmptyColumn` or leaves that column zero (``"skip"``).
    """
    convention = KernelConvention(convention)
    if on_empty not in ("raise", "skip"):
        raise InvalidParameter(f"on_empty must be 'raise' or 'skip', got {on_empty!r}")
    ev = _evaluator(cfg, convention, evaluator)
    x = nodes.points
    N, n, m = x.size, cfg.M_sigma, cfg.m
    s_grid = frequencies(n)
    # invert the node -> grid incidence once instead of scanning all nodes per l
    u_lo, u_hi = _unwrapped_range(x, n, m)
    width = 2 * m + 1
    u = u_lo[:, None] + np.arange(width)[None, :]
    ok = u <= u_hi[:, None]
    node_of = np.broadcast_to(np.arange(N)[:, None], u.shape)[ok]
    grid_of = _wrap_grid(u[ok], n)
    order = np.lexsort((node_of, grid_of))
    node_of, grid_of = node_of[order], grid_of[order]
    bounds = np.searchsorted(grid_of, s_grid), np.searchsorted(grid_of, s_grid, side="right")

    cols, sups, vals = [], [], []
    ranks = np.zeros(n, dtype=np.int64)
    resid = np.ones(n)
    mean_sup = max(1, int(np.ceil(len(node_of) / n)))
    block = _block_size(n, mean_sup)
    for start in range(0, n, block):
        ls = s_grid[start : start + block]
        supports = [np.unique(node_of[bounds[0][i] : bounds[1][i]]) for i in range(start, start + len(ls))]
        nonempty = [s for s in supports if s.size]
        if nonempty:
            union = np.unique(np.concatenate(nonempty))
            Lrows = np.conj(ev(x[None, union] - s_grid[:, None] / n))
        for l, js in zip(ls, supports):
            if js.size == 0:
                if on_empty == "raise":
                    raise EmptyColumn(int(l))
                continue
            rhs = np.zeros(n, dtype=complex)
            rhs[l + n // 2] = 1.0
            system = ColumnSystem(int(l), Lrows[:, np.searchsorted(union, js)], rhs, js)
            b = solve_column(system, ridge)
            cols.append(int(l))
            sups.append(js)
            vals.append(b)
            ranks[l + n // 2] = system.rank
            resid[l + n // 2] = system.residual
    B = _assemble("B", N, n, cols, sups, vals)
    prov = {"algorithm": "optimize_B", **ev.provenance(), "ridge": ridge, "on_empty": on_empty}
    return OptimizedSpreadMatrix("B", B, cfg, convention, 1.0, prov, ranks, resid)


# ---------------------------------------------------------------------------
# applying the optimized matrices
# ---------------------------------------------------------------------------


def _check(plan: NfftPlan | None, Bopt: OptimizedSpreadMatrix):
    if plan is None:
        return
    if plan.N != Bopt.N or plan.M_sigma != Bopt.cfg.M_sigma or plan.M != Bopt.cfg.M:
        raise DimensionMismatch("plan and optimized matrix disagree on N, M or M_sigma")


def _adjoint_with(Bopt, f):
    f = np.asarray(f)
    if f.shape[0] != Bopt.N:
        raise DimensionMismatch(f"expected {Bopt.N} samples, got {f.shape[0]}")
    # D^* F^* B_opt^* f
    g = Bopt.B.conj().T @ f
    return np.conj(Bopt.D) * from_grid(g, Bopt.cfg.M)


def _forward_with(Bopt, h):
    h = np.asarray(h)
    if h.shape[0] != Bopt.cfg.M:
        raise DimensionMismatch(f"expected {Bopt.cfg.M} coefficients, got {h.shape[0]}")
    # B_opt F D h
    return Bopt.B @ to_grid(Bopt.D * h, Bopt.cfg.M_sigma)


def apply_inverse_underdetermined(plan, B_opt: OptimizedSpreadMatrix, f) -> np.ndarray:
    """``f_check = (1/M) D^* F^* B_opt^* f`` (Fourier coefficients from samples)."""
    _check(plan, B_opt)
    return _adjoint_with(B_opt, f) / B_opt.cfg.M


def apply_inverse_overdetermined(plan, B_opt: OptimizedSpreadMatrix, f) -> np.ndarray:
    """``h_tilde = D^* F^* B_opt^* f`` (no ``1/M``; pair with :func:`optimize_B`)."""
    _check(plan, B_opt)
    return _adjoint_with(B_opt, f)


def apply_inverse_adjoint_under(plan, B_opt: OptimizedSpreadMatrix, h) -> np.ndarray:
    """``f_tilde = (1/M) B_opt F D h`` (samples from ``h = A^* f``)."""
    _check(plan, B_opt)
    return _forward_with(B_opt, h) / B_opt.cfg.M


def apply_inverse_adjoint_over(plan, B_opt: OptimizedSpreadMatrix, h) -> np.ndarray:
    """``f_tilde = B_opt F D h``."""
    _check(plan, B_opt)
    return _forward_with(B_opt, h)


# ---------------------------------------------------------------------------
# dense diagnostics
# ---------------------------------------------------------------------------


def _dense_B(cfg, nodes, B):
    if B is None:
        return spread_matrix(cfg, nodes).toarray()
    if isinstance(B, OptimizedSpreadMatrix):
        return B.B.toarray()
    if sp.issparse(B):
        return B.toarray()
    return np.asarray(B)


def deviation_matrix(cfg: WindowConfig, nodes: NodeSet, B=None, side: str = "under",
                     convention=None, target_scale: float | None = None) -> np.ndarray:
    """Dense ``A D^* F^* B^* - c I_N`` (``side="under"``) or ``F D A^* B - I`` (``"over"``).

    ``B`` may be an :class:`OptimizedSpreadMatrix` (its convention is used unless
    overridden), any ``N x M_sigma`` matrix, or ``None`` for the window matrix.
    ``c`` defaults to ``M``.
    """
    if convention is None:
        convention = B.convention if isinstance(B, OptimizedSpreadMatrix) else KernelConvention.WINDOW
    N, M, n = nodes.N, cfg.M, cfg.M_sigma
    check_dense(max(N, n), max(N, n), "deviation matrix")
    check_dense(n, M)
    A = nfft_matrix(nodes, M)
    D = kernel_coefficients(cfg, convention, sign=+1)
    F = fourier_matrix(M, n)
    Bd = _dense_B(cfg, nodes, B)
    if Bd.shape != (N, n):
        raise DimensionMismatch(f"B has shape {Bd.shape}, expected {(N, n)}")
    if side == "under":
        c = M if target_scale is None else target_scale
        K = (A * np.conj(D)) @ F.conj().T
        return K @ Bd.conj().T - c * np.eye(N)
    if side == "over":
        Kh = (F * D) @ A.conj().T
        return Kh @ Bd - np.eye(n)
    raise InvalidParameter(f"side must be 'under' or 'over', got {side!r}")


def frobenius_deviation(cfg: WindowConfig, nodes: NodeSet, B=None, side: str = "under",
                        convention=None, target_scale: float | None = None) -> float:
    """Frobenius norm of :func:`deviation_matrix`."""
    return float(np.linalg.norm(deviation_matrix(cfg, nodes, B, side, convention, target_scale)))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _header(Bopt: OptimizedSpreadMatrix) -> dict:
    return {
        "format": "infft-optimized-spread-matrix",
        "version": FORMAT_VERSION,
        "orientation": Bopt.orientation,
        "N": Bopt.N,
        "M": Bopt.cfg.M,
        "sigma": Bopt.cfg.sigma,
        "M_sigma": Bopt.cfg.M_sigma,
        "m": Bopt.cfg.m,
        "window": Bopt.cfg.kind.value,
        "kernel_convention": Bopt.convention.value,
        "target_scale": Bopt.target_scale,
        "provenance": Bopt.provenance,
    }


def _from_header(h, B, ranks=None, residuals=None) -> OptimizedSpreadMatrix:
    if h.get("format") != "infft-optimized-spread-matrix" or h.get("version") != FORMAT_VERSION:
        raise InvalidParameter("not an optimized spread matrix file of a supported version")
    cfg = WindowConfig(h["window"], h["m"], h["M"], h["sigma"])
    if cfg.M_sigma != h["M_sigma"]:
        raise InvalidParameter("stored M_sigma does not match (M, sigma)")
    return OptimizedSpreadMatrix(h["orientation"], B, cfg, KernelConvention(h["kernel_convention"]),
                                 float(h["target_scale"]), dict(h.get("provenance", {})), ranks, residuals)


def save_json(path, Bopt: OptimizedSpreadMatrix) -> None:
    """Header plus one record per column; floats are written with ``repr`` precision."""
    cols = [
        {"column": int(c), "index": [int(i) for i in idx], "re": v.real.tolist(), "im": v.imag.tolist()}
        for c, idx, v in Bopt.columns()
    ]
    Path(path).write_text(json.dumps({"header": _header(Bopt), "columns": cols}, indent=1))


def load_json(path) -> OptimizedSpreadMatrix:
    doc = json.loads(Path(path).read_text())
    h = doc.get("header", {}) if isinstance(doc, dict) else {}
    _from_header(h, None)  # validates before anything is indexed
    n, N = h["M_sigma"], h["N"]
    cols = [c["column"] for c in doc["columns"]]
    sups = [np.asarray(c["index"], dtype=np.int64) for c in doc["columns"]]
    vals = [np.asarray(c["re"], dtype=float) + 1j * np.asarray(c["im"], dtype=float) for c in doc["columns"]]
    return _from_header(h, _assemble(h["orientation"], N, n, cols, sups, vals))


def save_npz(path, Bopt: OptimizedSpreadMatrix) -> None:
    """Binary container; the round trip is bit-exact."""
    B = Bopt.B.tocsr()
    np.savez(
        path,
        header=np.array(json.dumps(_header(Bopt))),
        indptr=B.indptr, indices=B.indices, data=B.data,
        ranks=np.array([] if Bopt.ranks is None else Bopt.ranks),
        residuals=np.array([] if Bopt.residuals is None else Bopt.residuals),
    )


def load_npz(path) -> OptimizedSpreadMatrix:
    with np.load(path, allow_pickle=False) as z:
        h = json.loads(str(z["header"]))
        B = sp.csr_matrix((z["data"], z["indices"], z["indptr"]), shape=(h["N"], h["M_sigma"]))
        ranks = z["ranks"] if z["ranks"].size else None
        res = z["residuals"] if z["residuals"].size else None
    return _from_header(h, B, ranks, res)
