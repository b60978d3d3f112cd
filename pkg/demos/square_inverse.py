"""Recover Fourier coefficients from as many nonuniform samples.

Draws jittered nodes, samples a trigonometric polynomial with known
coefficients and inverts the square Fourier matrix with the Lagrange-type
direct formula.  The fast summations inside run in O(N log N).

    python3 demos/square_inverse.py [N]
"""

import sys
import time

import numpy as np

from infft import WindowConfig, infft_quadratic, jittered, nfft_forward, plan_build
from infft.bench import metric_errors

N = int(sys.argv[1]) if len(sys.argv) > 1 else 1024
rng = np.random.default_rng(0)
x = jittered(N, 0.25, seed=0)
fhat = rng.uniform(1, 100, N)
# samples from an NFFT accurate to about 1e-15
f = nfft_forward(plan_build(WindowConfig("kaiser_bessel", 8, N, 2.0), x), fhat)

t = time.perf_counter()
rec = infft_quadratic(x, f)
dt = time.perf_counter() - t

err = metric_errors("coefficients", fhat, rec)
print(f"N = {N}, solve took {dt * 1e3:.1f} ms")
for k, v in err.items():
    print(f"  {k:12s} {v:.3e}")
