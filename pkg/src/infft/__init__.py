"""Direct (non-iterative) inversion of the nonequispaced fast Fourier transform.

Submodules
----------
windows     window functions, their Fourier transforms, inverse window kernels
nodes       node families and node-set I/O
nfft        NFFT plans, dense NDFT oracles
fastsum     fast summation for the cotangent and log|sin| kernels
quadratic   square inverse (``M = N``) by Lagrange interpolation
rect        rectangular inverses via optimized sparse spreading matrices
frames      frame-theoretic view of the optimization
bench       experiment drivers for ``infft-bench``
"""

from .errors import (
    CoincidentNodes,
    DimensionMismatch,
    EmptyColumn,
    InfftError,
    InvalidParameter,
    RankDeficientColumn,
    SizeLimitExceeded,
    UnsupportedIndex,
    ZeroWindowTransform,
)
from .fastsum import COTANGENT, LOGSIN, fastsum_apply, fastsum_direct, fastsum_plan
from .nfft import NfftPlan, ndft_adjoint, ndft_forward, nfft_adjoint, nfft_forward, nfft_matrix, plan_build
from .nodes import NodeSet, chebyshev, equispaced, jittered, logarithmic, random_uniform
from .quadratic import QuadraticParams, infft_adjoint_quadratic, infft_quadratic, quadratic_plan
from .rect import (
    OptimizedSpreadMatrix,
    apply_inverse_adjoint_over,
    apply_inverse_adjoint_under,
    apply_inverse_overdetermined,
    apply_inverse_underdetermined,
    frobenius_deviation,
    optimize_B,
    optimize_B_star,
)
from .windows import KernelConvention, WindowConfig, WindowKind

__version__ = "0.1.0"
