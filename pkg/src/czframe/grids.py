"""Finite discretizations: uniform spatial grid and hyperbolic frame lattice.

The frame lattice discretizes the upper half-plane with log-uniform scales and
translation spacing proportional to scale, which makes the node density nearly
uniform in the Haar measure dlam = da db / a^2.  Each node carries the Haar
quadrature weight of its cell, dlam = (dlog a) * (db / a) = du * s per node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GroupPoint, dist_to_identity

__all__ = [
    "SpatialGrid",
    "SampledFunction",
    "FrameGrid",
    "make_frame_grid",
    "inner_product",
    "l2_norm",
    "tail_nodes",
]


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid on [-L, L) with N nodes and spacing h = 2L/N."""

    L: float
    N: int

    def __post_init__(self):
        if self.N < 16:
            raise ValueError("spatial grid needs at least 16 nodes")
        if self.L <= 0:
            raise ValueError("half-width must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)


@dataclass
class SampledFunction:
    """Function values on a spatial grid."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.N,):
            raise GridMismatchError(
                f"values length {self.values.shape} does not match grid size {self.grid.N}"
            )

    @classmethod
    def from_callable(cls, grid: SpatialGrid, fn) -> "SampledFunction":
        return cls(grid, np.asarray(fn(grid.x)))


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """L^2 inner product, sum f * conj(g) * h.  Grids must match."""
    if f.grid != g.grid:
        raise GridMismatchError("inner product requires a common grid")
    v = np.sum(f.values * np.conj(g.values)) * f.grid.h
    return complex(v)


def l2_norm(f: SampledFunction) -> float:
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.h))


@dataclass
class FrameGrid:
    """Hyperbolic lattice with per-node Haar weights.

    Nodes are grouped by scale: scale j has value ``scales[j]`` and occupies
    ``slice(offsets[j], offsets[j+1])`` in the flat ``a``/``b``/``dlam`` arrays.
    Scales are log-uniform with step du; translations are spaced s * a_j and,
    when ``cone_factor > 0``, extend to |b| <= L_b + cone_factor * a_j so the
    lattice keeps covering frame coefficients of box-supported functions at
    scales much larger than the box.
    """

    a: np.ndarray
    b: np.ndarray
    dlam: np.ndarray
    scales: np.ndarray
    offsets: np.ndarray
    s: float
    du: float
    L_b: float
    cone_factor: float
    _dist0: np.ndarray = field(default=None, repr=False)

    @property
    def n_nodes(self) -> int:
        return self.a.size

    def scale_slice(self, j: int) -> slice:
        return slice(int(self.offsets[j]), int(self.offsets[j + 1]))

    @property
    def dist0(self) -> np.ndarray:
        """Hyperbolic distance of every node to the identity (cached)."""
        if self._dist0 is None:
            self._dist0 = dist_to_identity(self.a, self.b)
        return self._dist0

    def points(self, idx) -> list[GroupPoint]:
        return [GroupPoint(float(self.a[i]), float(self.b[i])) for i in np.atleast_1d(idx)]


def make_frame_grid(
    spatial: SpatialGrid,
    a_min: float,
    a_max: float,
    s: float = 0.25,
    L_b: float | None = None,
    cone_factor: float = 1.0,
) -> FrameGrid:
    """Build the frame lattice for a spatial grid.

    Scale nodes are midpoints of log-uniform cells on [a_min, a_max] with step
    du = s; translation nodes at scale a are spaced s * a, symmetric about 0.
    Haar weight per node: dlam = du * s (n = 1).

    Raises ValueError when a_min < 2h (scales below spatial resolution).
    """
    if not (0 < s <= 1):
        raise ValueError("spacing ratio s must lie in (0, 1]")
    if a_min < 2.0 * spatial.h:
        raise ValueError(
            f"a_min={a_min} is below the resolution limit 2h={2 * spatial.h}; "
            "increase a_min or refine the spatial grid"
        )
    if a_max <= a_min:
        raise ValueError("a_max must exceed a_min")
    if L_b is None:
        L_b = spatial.L

    du = s
    n_scales = max(1, int(round(math.log(a_max / a_min) / du)))
    u = math.log(a_min) + du * (np.arange(n_scales) + 0.5)
    scales = np.exp(u)

    a_parts, b_parts = [], []
    offsets = [0]
    for aj in scales:
        bmax = L_b + cone_factor * aj
        step = s * aj
        k = int(math.floor(bmax / step))
        bj = step * np.arange(-k, k + 1)
        a_parts.append(np.full(bj.size, aj))
        b_parts.append(bj)
        offsets.append(offsets[-1] + bj.size)

    a = np.concatenate(a_parts)
    b = np.concatenate(b_parts)
    dlam = np.full(a.size, du * s)
    return FrameGrid(
        a=a,
        b=b,
        dlam=dlam,
        scales=scales,
        offsets=np.asarray(offsets),
        s=s,
        du=du,
        L_b=float(L_b),
        cone_factor=cone_factor,
    )


def tail_nodes(fgrid: FrameGrid, R: float) -> np.ndarray:
    """Boolean mask of nodes at hyperbolic distance >= R from the identity."""
    if R < 0:
        raise ValueError("R must be nonnegative")
    return fgrid.dist0 >= R
