"""Experiment drivers behind ``infft-bench``.

Each experiment is a generator of :class:`ExperimentRecord` rows; the CLI only
parses options and writes CSV.  Test data are trigonometric polynomials with
coefficients drawn uniformly from ``[1, 100]``; samples come from the dense
transform at desk sizes and from a high-accuracy NFFT (Kaiser-Bessel, ``m=8``,
``sigma=2``) beyond.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, fields

import numpy as np

from . import nodes as _nodes
from .errors import DimensionMismatch, InvalidParameter, RankDeficientColumn, SizeLimitExceeded
from .nfft import check_dense, nfft_adjoint, nfft_forward, nfft_matrix, ndft_adjoint, ndft_forward, plan_build
from .quadratic import QuadraticParams, infft_quadratic
from .rect import (
    apply_inverse_adjoint_over,
    apply_inverse_adjoint_under,
    apply_inverse_overdetermined,
    apply_inverse_underdetermined,
    frobenius_deviation,
    optimize_B,
    optimize_B_star,
)
from .windows import KernelConvention, WindowConfig, WindowKind

__all__ = [
    "ExperimentRecord",
    "METRICS",
    "CSV_HEADER",
    "EXPERIMENTS",
    "metric_errors",
    "cond2",
    "make_nodes",
    "run",
]

METRICS = ("abs_err_2", "abs_err_inf", "rel_err_2", "rel_err_inf", "frob_orig", "frob_opt", "cond2", "wall_ms")
CSV_HEADER = ("experiment", "N", "M", "sigma", "m", "p", "nodes", "seed", "metric", "value", "git", "timestamp")

# desk-scale caps (overridable with unsafe=True)
DENSE_CAP = 2**12
FAST_CAP = 2**16
_DENSE_DATA = 2**22


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    N: int
    M: int
    sigma: float | None
    m: int | None
    p: int | None
    nodes: str
    seed: int
    metric: str
    value: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise InvalidParameter(f"unknown metric {self.metric!r}")
        if not (np.isfinite(self.value) and self.value >= 0):
            raise InvalidParameter(f"{self.metric} must be finite and non-negative, got {self.value}")

    def row(self, git: str = "", timestamp: str = "") -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                out.append("")
            elif f.name == "value":
                out.append(format(float(v), ".17g"))
            elif isinstance(v, float):
                out.append(format(v, "g"))
            else:
                out.append(str(v))
        return out + [git, timestamp]


MODES = ("coefficients", "residual", "adjoint")


def metric_errors(mode: str, reference, estimate, N: int | None = None) -> dict:
    """Absolute and relative errors per node, ``||ref - est||_r / N`` and ``... / (N ||ref||_r)``.

    ``mode`` names what is being compared (``"coefficients"``: ``f_hat`` vs its
    reconstruction; ``"residual"``: ``f`` vs ``A f_check``; ``"adjoint"``:
    ``f`` vs ``f_tilde``); the formulas are the same.  ``N`` defaults to
    ``len(reference)``.
    """
    if mode not in MODES:
        raise InvalidParameter(f"mode must be one of {MODES}, got {mode!r}")
    ref = np.asarray(reference)
    est = np.asarray(estimate)
    if ref.shape != est.shape:
        raise DimensionMismatch(f"shapes differ: {ref.shape} vs {est.shape}")
    N = ref.size if N is None else N
    diff = ref - est
    out = {}
    for r, name in ((2, "2"), (np.inf, "inf")):
        e = float(np.linalg.norm(diff, r))
        nref = float(np.linalg.norm(ref, r))
        out[f"abs_err_{name}"] = e / N
        out[f"rel_err_{name}"] = e / (N * nref) if nref > 0 else (0.0 if e == 0 else np.inf)
    return out


def cond2(nodes: _nodes.NodeSet, M: int) -> float:
    """Spectral condition number ``s_max / s_min`` of the ``N x M`` Fourier matrix."""
    s = np.linalg.svd(nfft_matrix(nodes, M), compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


NODE_KINDS = ("jittered", "chebyshev", "logarithmic", "equispaced", "random")


def make_nodes(kind: str, N: int, seed: int) -> _nodes.NodeSet:
    if kind == "jittered":
        return _nodes.jittered(N, 0.25, seed)
    if kind == "chebyshev":
        return _nodes.chebyshev(N)
    if kind == "logarithmic":
        return _nodes.logarithmic(N)
    if kind == "equispaced":
        return _nodes.equispaced(N)
    if kind == "random":
        return _nodes.random_uniform(N, seed)
    raise InvalidParameter(f"unknown node kind {kind!r}; choose from {NODE_KINDS}")


def _coefficients(M, seed):
    return _nodes.rng(seed + 1).uniform(1.0, 100.0, M)


def _accurate_plan(x, M):
    return plan_build(WindowConfig(WindowKind.KAISER_BESSEL, 8, M, 2.0), x)


def _samples(x, fhat):
    if x.N * fhat.size <= _DENSE_DATA:
        return ndft_forward(x, fhat)
    return nfft_forward(_accurate_plan(x, fhat.size), fhat)


def _adjoint(x, f, M):
    if x.N * M <= _DENSE_DATA:
        return ndft_adjoint(x, f, M)
    return nfft_adjoint(_accurate_plan(x, M), f)


def _cap(unsafe, limit, **sizes):
    if unsafe:
        return
    for name, v in sizes.items():
        if v > limit:
            raise SizeLimitExceeded(f"{name}={v} exceeds the desk-scale cap {limit}; pass --unsafe-large")


def _convention(kernel):
    return [KernelConvention(k) for k in (["window", "dirichlet"] if kernel == "both" else [kernel])]


def _error_rows(exp, N, M, sigma, m, p, kind, seed, errs):
    for name in ("abs_err_2", "abs_err_inf", "rel_err_2", "rel_err_inf"):
        yield ExperimentRecord(exp, N, M, sigma, m, p, kind, seed, name, errs[name])


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def quadratic_errors(*, n=None, n_min=None, n_max=None, n_fixed=None, p_list=None, p=None,
                     nodes="jittered", seed=0, unsafe=False, **_):
    """Square Lagrange inverse: errors per node over N = 2^c (m = p fixed), then over m = p at fixed N."""
    Ns = _pow2(n, n_min, n_max, 1, 10)
    n_fixed = 1024 if n_fixed is None else n_fixed
    p = 4 if p is None else p
    p_list = tuple(range(4, 13)) if p_list is None else p_list
    _cap(unsafe, FAST_CAP, N=max(Ns), n_fixed=n_fixed)
    for N in Ns:
        x = make_nodes(nodes, N, seed)
        fhat = _coefficients(N, seed)
        est = infft_quadratic(x, _samples(x, fhat), QuadraticParams(p=p, inner_m=p, seed=seed))
        yield from _error_rows("quadratic-errors:N", N, N, None, p, p, nodes, seed,
                               metric_errors("coefficients", fhat, est))
    N = n_fixed
    x = make_nodes(nodes, N, seed)
    fhat = _coefficients(N, seed)
    f = _samples(x, fhat)
    for q in p_list:
        est = infft_quadratic(x, f, QuadraticParams(p=q, inner_m=q, seed=seed))
        yield from _error_rows("quadratic-errors:p", N, N, None, q, q, nodes, seed,
                               metric_errors("coefficients", fhat, est))


def condition_numbers(*, n=None, n_min=None, n_max=None, nodes="all", seed=0, unsafe=False, **_):
    """cond_2(A) for N = M over node kinds."""
    sizes = _pow2(n, n_min, n_max, 1, 10)
    _cap(unsafe, DENSE_CAP, N=max(sizes))
    kinds = ("jittered", "chebyshev", "logarithmic") if nodes == "all" else (nodes,)
    for kind in kinds:
        for N in sizes:
            yield ExperimentRecord("cond", N, N, None, None, None, kind, seed, "cond2", cond2(make_nodes(kind, N, seed), N))


def _optimize_rows(exp, side, cfg, x, kind, seed, kernel, ridge, warn):
    orig = frobenius_deviation(cfg, x, None, side)
    yield ExperimentRecord(exp, x.N, cfg.M, cfg.sigma, cfg.m, None, kind, seed, "frob_orig", orig)
    for conv in _convention(kernel):
        try:
            if side == "under":
                Bo = optimize_B_star(cfg, x, conv, ridge=ridge)
            else:
                Bo = optimize_B(cfg, x, conv, ridge=ridge, on_empty="skip")
        except RankDeficientColumn as exc:
            warn(f"{exp}:{conv.value} N={x.N} M={cfg.M} m={cfg.m}: {exc}; row skipped")
            continue
        yield ExperimentRecord(f"{exp}:{conv.value}", x.N, cfg.M, cfg.sigma, cfg.m, None, kind, seed,
                               "frob_opt", frobenius_deviation(cfg, x, Bo, side))


def _pow2(n, lo, hi, default_lo, default_hi):
    if n is not None:
        return list(n) if isinstance(n, (list, tuple)) else [int(n)]
    return [2**c for c in range(default_lo if lo is None else lo, (default_hi if hi is None else hi) + 1)]


def frob_under(*, n=None, M=None, n_min=None, n_max=None, m_list=(2,), sigma=1.0, window="bspline",
               kernel="both", nodes="jittered", seed=0, ridge=None, unsafe=False, warn=None, **_):
    """||A D^* F^* B^* - M I||_F for window and optimized B^*, N fixed, M = 2^c swept."""
    N = 128 if n is None else int(n)
    Ms = _pow2(M, n_min, n_max, 4, 12)
    _cap(unsafe, DENSE_CAP, N=N, M=max(Ms))
    x = make_nodes(nodes, N, seed)
    for m in m_list:
        for Mv in Ms:
            cfg = WindowConfig(window, m, Mv, sigma)
            yield from _optimize_rows("frob-under", "under", cfg, x, nodes, seed, kernel, ridge, warn or _quiet)


def frob_over(*, M=None, n=None, n_min=None, n_max=None, m_list=(2,), sigma=1.0, window="bspline",
              kernel="both", nodes="jittered", seed=0, ridge=None, unsafe=False, warn=None, **_):
    """||F D A^* B - I||_F for window and optimized B, M fixed, N = 2^c swept."""
    Mv = 128 if not M else int(M[0] if isinstance(M, (list, tuple)) else M)
    Ns = _pow2(n, n_min, n_max, 2, 12)
    _cap(unsafe, DENSE_CAP, N=max(Ns), M=Mv)
    for m in m_list:
        cfg = WindowConfig(window, m, Mv, sigma)
        for N in Ns:
            x = make_nodes(nodes, N, seed)
            yield from _optimize_rows("frob-over", "over", cfg, x, nodes, seed, kernel, ridge, warn or _quiet)


def _timed(fn, *a, **kw):
    t = time.perf_counter()
    fn(*a, **kw)
    return 1e3 * (time.perf_counter() - t)


def runtime(*, algorithm="both", m_list=(2,), sigma=1.0, window="bspline", nodes="jittered", seed=0,
            n=None, M=None, n_min=None, n_max=None, unsafe=False, **_):
    """Wall time of both optimizers, window kernel against the Dirichlet closed form.

    ``under``: N fixed (default 128), M = 2^c swept.  ``over``: M fixed
    (default 128), N = 2^c swept.  The sweep bounds apply to the swept size.
    """
    runs = []
    if algorithm in ("under", "both"):
        N = 128 if n is None else int(n)
        runs += [("under", N, Mv) for Mv in _pow2(M, n_min, n_max, 4, 12)]
    if algorithm in ("over", "both"):
        Mv = 128 if not M else int(M[0] if isinstance(M, (list, tuple)) else M)
        runs += [("over", N, Mv) for N in _pow2(None, n_min, n_max, 2, 12)]
    if not runs:
        raise InvalidParameter(f"algorithm must be under, over or both, got {algorithm!r}")
    _cap(unsafe, FAST_CAP, N=max(r[1] for r in runs), M=max(r[2] for r in runs))
    for m in m_list:
        for side, N, Mv in runs:
            x = make_nodes(nodes, N, seed)
            cfg = WindowConfig(window, m, Mv, sigma)
            for conv in _convention("both"):
                try:
                    if side == "under":
                        ms = _timed(optimize_B_star, cfg, x, conv)
                    else:
                        ms = _timed(optimize_B, cfg, x, conv, on_empty="skip")
                except RankDeficientColumn:
                    continue
                yield ExperimentRecord(f"runtime:{side}:{conv.value}", N, Mv, sigma, m, None, nodes, seed, "wall_ms", ms)


def _quiet(msg):
    pass


def _errors_rect(exp, adjoint, under, *, n_min, n_max, factor, m, m_list, n_fixed, sigma, window, kernel,
                 nodes, seed, ridge, unsafe, warn):
    warn = warn or _quiet
    conv = KernelConvention(kernel)
    runs = []
    for c in range(n_min, n_max + 1):
        runs.append((exp + ":N", 2**c, m))
    for mm in m_list:
        runs.append((exp + ":m", n_fixed, mm))
    sizes = [s for _, s, _ in runs]
    _cap(unsafe, FAST_CAP, N=max(sizes) * (1 if under else factor), M=max(sizes) * (factor if under else 1))
    for name, size, mm in runs:
        N, M = (size, factor * size) if under else (factor * size, size)
        x = make_nodes(nodes, N, seed)
        cfg = WindowConfig(window, mm, M, sigma)
        fhat = _coefficients(M, seed)
        f = _samples(x, fhat)
        try:
            if under:
                Bo = optimize_B_star(cfg, x, conv, ridge=ridge)
            else:
                Bo = optimize_B(cfg, x, conv, ridge=ridge, on_empty="skip")
        except RankDeficientColumn as exc:
            warn(f"{name} N={N} M={M} m={mm}: {exc}; rows skipped")
            continue
        if adjoint:
            h = _adjoint(x, f, M)
            est = (apply_inverse_adjoint_under if under else apply_inverse_adjoint_over)(None, Bo, h)
            errs = metric_errors("adjoint", f, est)
        elif under:
            fc = apply_inverse_underdetermined(None, Bo, f)
            errs = metric_errors("residual", f, _samples(x, fc))
        else:
            errs = metric_errors("coefficients", fhat, apply_inverse_overdetermined(None, Bo, f), N=N)
        yield from _error_rows(name, N, M, sigma, mm, None, nodes, seed, errs)


def _rect_defaults(under):
    return dict(n_min=4, n_max=9, factor=4, m=4, m_list=tuple(range(4, 13)),
                n_fixed=512, sigma=2.0, window="bspline", kernel="dirichlet",
                nodes="jittered", seed=0, ridge=None, unsafe=False, warn=None)


def _rect_experiment(exp, adjoint, under):
    defaults = _rect_defaults(under)
    if not under:
        defaults.update(n_min=5)

    def run_it(**opts):
        kw = {k: v if opts.get(k) is None else opts[k] for k, v in defaults.items()}
        return _errors_rect(exp, adjoint, under, **kw)

    return run_it


errors_under = _rect_experiment("errors-under", False, True)
errors_under_adjoint = _rect_experiment("errors-under-adjoint", True, True)
errors_over = _rect_experiment("errors-over", False, False)
errors_over_adjoint = _rect_experiment("errors-over-adjoint", True, False)


EXPERIMENTS = {
    "quadratic-errors": (quadratic_errors, "square Lagrange inverse: errors per node over N = 2^c, and over m = p at N = 1024"),
    "cond": (condition_numbers, "cond_2(A) for N = M, jittered / Chebyshev / logarithmic nodes"),
    "frob-under": (frob_under, "Frobenius deviation of B^* before and after optimization, N = 128, M = 2^4..2^12 (also Chebyshev via --nodes)"),
    "runtime": (runtime, "optimizer wall time, window kernel vs Dirichlet, both algorithms"),
    "errors-under": (errors_under, "inverse via optimized B^*: residual errors per node, M = 4N sweep and m sweep"),
    "errors-under-adjoint": (errors_under_adjoint, "inverse adjoint via optimized B^*: errors per node, M = 4N sweep and m sweep"),
    "frob-over": (frob_over, "Frobenius deviation of B before and after optimization, M = 128, N = 2^2..2^12 (also Chebyshev via --nodes)"),
    "errors-over": (errors_over, "inverse via optimized B: coefficient errors per node, N = 4M sweep and m sweep"),
    "errors-over-adjoint": (errors_over_adjoint, "inverse adjoint via optimized B: errors per node, N = 4M sweep and m sweep"),
}


def run(name: str, **opts):
    try:
        fn = EXPERIMENTS[name][0]
    except KeyError:
        raise InvalidParameter(f"unknown experiment {name!r}") from None
    yield from fn(**opts)
