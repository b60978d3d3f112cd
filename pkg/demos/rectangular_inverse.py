"""Approximate inverses of rectangular NFFT matrices by optimized sparse spreading.

Two regimes are shown.  With fewer nodes than frequencies (M = 4N) the sparse
matrix B^* is fitted so that A D^* F^* B^* is close to M I, giving a
coefficient vector that reproduces the samples.  With more nodes than
frequencies (N = 4M) the matrix B is fitted so that F D A^* B is close to the
identity, which recovers the coefficients themselves.

    python3 demos/rectangular_inverse.py
"""

import numpy as np

from infft import (
    WindowConfig,
    apply_inverse_overdetermined,
    apply_inverse_underdetermined,
    frobenius_deviation,
    jittered,
    ndft_forward,
    optimize_B,
    optimize_B_star,
)
from infft.bench import metric_errors

rng = np.random.default_rng(1)

print("fewer nodes than frequencies")
N, M = 64, 256
x = jittered(N, 0.25, seed=1)
cfg = WindowConfig("bspline", m=4, M=M, sigma=2.0)
f = ndft_forward(x, rng.uniform(1, 100, M))
for kernel in ("window", "dirichlet"):
    Bs = optimize_B_star(cfg, x, kernel)
    fc = apply_inverse_underdetermined(None, Bs, f)
    e = metric_errors("residual", f, ndft_forward(x, fc))
    print(f"  {kernel:9s} frob {frobenius_deviation(cfg, x, None, 'under', kernel):9.3e}"
          f" -> {frobenius_deviation(cfg, x, Bs, 'under'):9.3e}   residual rel_err_2/N {e['rel_err_2']:.2e}")

print("more nodes than frequencies")
N, M = 1024, 256
x = jittered(N, 0.25, seed=2)
cfg = WindowConfig("bspline", m=4, M=M, sigma=2.0)
fhat = rng.uniform(1, 100, M)
f = ndft_forward(x, fhat)
for kernel in ("window", "dirichlet"):
    B = optimize_B(cfg, x, kernel)
    e = metric_errors("coefficients", fhat, apply_inverse_overdetermined(None, B, f), N=N)
    print(f"  {kernel:9s} frob {frobenius_deviation(cfg, x, None, 'over', kernel):9.3e}"
          f" -> {frobenius_deviation(cfg, x, B, 'over'):9.3e}   coefficient rel_err_2/N {e['rel_err_2']:.2e}")
