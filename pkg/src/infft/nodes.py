"""Node sets on the torus ``[-1/2, 1/2)`` and the generators used in experiments.

Randomness comes from ``numpy.random.Generator(PCG64(seed))`` so that every
node set (and every CSV produced from it) is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParameter
from .windows import reduce_periodic

__all__ = [
    "NodeSet",
    "rng",
    "jittered",
    "chebyshev",
    "logarithmic",
    "equispaced",
    "random_uniform",
    "from_points",
    "read_nodes",
    "write_nodes",
]


def rng(seed) -> np.random.Generator:
    """The package-wide seeded generator (PCG64)."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Immutable set of nodes ``x_j`` in ``[-1/2, 1/2)``."""

    points: np.ndarray
    sorted: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).ravel()
        if pts.size < 1:
            raise InvalidParameter("a node set needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise InvalidParameter("nodes must be finite")
        if np.any(pts < -0.5) or np.any(pts >= 0.5):
            raise InvalidParameter("nodes must lie in [-1/2, 1/2)")
        if self.sorted and np.any(np.diff(pts) < 0):
            raise InvalidParameter("sorted flag set but points are not nondecreasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return self.points.size

    def __len__(self):
        return self.points.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)

    def sort(self) -> tuple["NodeSet", np.ndarray]:
        """Return the sorted node set and the permutation used (stable)."""
        perm = np.argsort(self.points, kind="stable")
        return NodeSet(self.points[perm], sorted=True), perm

    def shifted(self, delta: float) -> "NodeSet":
        """Translate all nodes by ``delta`` modulo one."""
        return NodeSet(reduce_periodic(self.points + delta))


def from_points(points) -> NodeSet:
    pts = np.asarray(points, dtype=float).ravel()
    return NodeSet(pts, sorted=bool(np.all(np.diff(pts) >= 0)))


def jittered(N: int, jitter_scale: float = 0.25, seed: int = 0) -> NodeSet:
    """Equispaced grid ``-1/2 + (j-1)/N`` perturbed by ``(jitter_scale/N) * U(0, 1)``."""
    _check_N(N)
    if not 0 <= jitter_scale < 0.5:
        raise InvalidParameter("jitter_scale must lie in [0, 1/2)")
    theta = rng(seed).random(N)
    y = -0.5 + np.arange(N) / N + (jitter_scale / N) * theta
    return NodeSet(y, sorted=True)


def chebyshev(N: int) -> NodeSet:
    """``y_j = cos((2(N-j)+1) pi / (2N)) / 2``, increasing in ``j``."""
    _check_N(N)
    j = np.arange(1, N + 1)
    y = 0.5 * np.cos((2 * (N - j) + 1) * np.pi / (2 * N))
    return NodeSet(y, sorted=True)


def logarithmic(N: int) -> NodeSet:
    """``y_j = (6/5)^(j-N)``, with values ``>= 1/2`` wrapped by subtracting one.

    The wrap is harmless for the Fourier matrix, which is 1-periodic in the
    nodes; it sends ``y_N = 1`` to ``0``.  Order of generation is kept.
    """
    _check_N(N)
    y = 1.2 ** (np.arange(1, N + 1, dtype=float) - N)
    y = np.where(y >= 0.5, y - 1.0, y)
    return from_points(y)


def equispaced(N: int) -> NodeSet:
    """Centered grid ``j/N`` with ``j = -N/2 .. N/2-1`` (``-(N-1)/2 .. (N-1)/2`` for odd ``N``)."""
    _check_N(N)
    j = np.arange(-(N // 2), N - N // 2)
    return NodeSet(j / N, sorted=True)


def random_uniform(N: int, seed: int = 0) -> NodeSet:
    _check_N(N)
    return NodeSet(rng(seed).random(N) - 0.5)


def write_nodes(path, nodes: NodeSet) -> None:
    """Plain text, one node per line with 17 significant digits."""
    Path(path).write_text("".join(f"{x:.17g}\n" for x in nodes.points))


def read_nodes(path) -> NodeSet:
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError as exc:
            raise InvalidParameter(f"{path}:{lineno}: not a number: {line!r}") from exc
    return from_points(values)


def _check_N(N):
    if int(N) != N or N < 1:
        raise InvalidParameter(f"N must be a positive integer, got {N}")
