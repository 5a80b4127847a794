"""Carleson-measure diagnostics for wavelet coefficient measures.

The coefficient measure of f places mass |<f, psi_(a,b)>|^2 * dlambda at
each lattice node.  The Carleson function takes suprema of tent masses
over base-ball volume; its vanishing profile along hyperbolic distance
separates CMO-type symbols (vanishing) from BMO-not-CMO symbols such as
log|x - x0| (non-vanishing along the dilation axis).  All tent and cone
suprema run over the frame lattice only, so reported values are lower
bounds of the continuum suprema and are exactly monotone under nesting.

Tents are closed on the lattice: the tent over B(b, a) collects nodes
(a', b') with a' <= a and |b' - b| <= a - a', so a node's own minimal tent
contains it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import dist_to_identity
from .grids import FrameGrid, SampledFunction, SpatialGrid
from .wavelets import analyze, _windows

__all__ = [
    "CoefficientMeasure",
    "coefficient_measure",
    "point_mass",
    "tent_masses",
    "carleson_function",
    "vanishing_profile",
    "nontangential_max",
    "stein_inequality_check",
    "BMOExample",
    "bmo_examples",
    "bmo_norm",
]


@dataclass
class CoefficientMeasure:
    """Nonnegative masses attached to the frame lattice nodes."""

    fgrid: FrameGrid
    masses: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=float)
        if self.masses.shape != (self.fgrid.n_nodes,):
            raise ValueError("one mass per lattice node required")
        if np.any(self.masses < 0.0):
            raise ValueError("masses must be nonnegative")

    def total(self) -> float:
        return float(np.sum(self.masses))


def coefficient_measure(f: SampledFunction, psi, fgrid: FrameGrid) -> CoefficientMeasure:
    """mu_f: mass |<f, psi_(a,b)>|^2 * dlambda at each node."""
    fld = analyze(f, psi, fgrid)
    return CoefficientMeasure(fgrid, np.abs(fld.values) ** 2 * fgrid.dlam)


def point_mass(fgrid: FrameGrid, node_index: int, mass: float = 1.0) -> CoefficientMeasure:
    """Synthetic measure with a single atom at one lattice node."""
    m = np.zeros(fgrid.n_nodes)
    m[node_index] = mass
    return CoefficientMeasure(fgrid, m)


def tent_masses(mu: CoefficientMeasure) -> np.ndarray:
    """Mass of the tent over B(b, a) for every lattice node (a, b).

    Per-scale cumulative sums plus binary search keep the sweep
    O(n_scales^2 * n_b log n_b) instead of O(n_nodes^2).
    """
    fg = mu.fgrid
    n_scales = len(fg.scales)
    b_per = [fg.b[fg.scale_slice(k)] for k in range(n_scales)]
    cums = [
        np.concatenate(([0.0], np.cumsum(mu.masses[fg.scale_slice(k)])))
        for k in range(n_scales)
    ]
    out = np.zeros(fg.n_nodes)
    for j in range(n_scales):
        sl = fg.scale_slice(j)
        a_j = fg.scales[j]
        b_j = fg.b[sl]
        acc = np.zeros(b_j.shape)
        for k in range(j + 1):
            r = a_j - fg.scales[k]
            if r < 0.0:
                continue
            lo = np.searchsorted(b_per[k], b_j - r, side="left")
            hi = np.searchsorted(b_per[k], b_j + r, side="right")
            acc += cums[k][hi] - cums[k][lo]
        out[sl] = acc
    return out


def _cone_mask(x: float, fgrid: FrameGrid) -> np.ndarray:
    return np.abs(x - fgrid.b) < fgrid.a


def carleson_function(
    mu: CoefficientMeasure,
    x: float,
    masses: np.ndarray | None = None,
) -> float:
    """C mu(x): sup over cone nodes above x of tent mass / |B(b, a)|.

    |B(b, a)| = 2a in one dimension.  Pass precomputed ``masses`` from
    :func:`tent_masses` when sweeping many x.
    """
    fg = mu.fgrid
    if abs(x) > fg.L_b:
        raise ValueError("x outside the translation box")
    if masses is None:
        masses = tent_masses(mu)
    sel = _cone_mask(x, fg)
    if not np.any(sel):
        return 0.0
    return float(np.max(masses[sel] / (2.0 * fg.a[sel])))


def vanishing_profile(mu: CoefficientMeasure, radii) -> np.ndarray:
    """R -> sup of tent mass ratio over tents indexed at distance >= R.

    Exactly non-increasing in R (nested node sets).
    """
    fg = mu.fgrid
    radii = np.asarray(radii, dtype=float)
    ratios = tent_masses(mu) / (2.0 * fg.a)
    dist = fg.dist0
    out = np.zeros(len(radii))
    for i, r in enumerate(radii):
        sel = dist >= r
        out[i] = float(np.max(ratios[sel])) if np.any(sel) else 0.0
    return out


def _phi_coefficients(f: SampledFunction, phi, fgrid: FrameGrid) -> np.ndarray:
    """<f, phi_(a,b)> with the L2-normalized dilation a^-1/2 phi((x-b)/a)."""
    grid = f.grid
    radius = getattr(phi, "support_radius", 1.0)
    out = np.empty(fgrid.n_nodes)
    x = grid.x
    for j in range(len(fgrid.scales)):
        sl = fgrid.scale_slice(j)
        a = fgrid.scales[j]
        b = fgrid.b[sl]
        i_lo, i_hi, w = _windows(b, a * radius, grid)
        if w == 0:
            out[sl] = 0.0
            continue
        idx = i_lo[:, None] + np.arange(w)[None, :]
        valid = idx < i_hi[:, None]
        idx_c = np.minimum(idx, grid.N - 1)
        block = phi((x[idx_c] - b[:, None]) / a) / math.sqrt(a)
        block *= valid
        out[sl] = np.einsum("nw,nw->n", block, f.values[idx_c].real) * grid.h
    return out


def nontangential_max(
    f: SampledFunction,
    phi,
    x: float,
    fgrid: FrameGrid,
    coeffs: np.ndarray | None = None,
) -> float:
    """Mf(x): sup over cone nodes of |<f, phi_(a,b)>|.

    ``phi`` must be radial (even), non-increasing in |x|, bounded and
    compactly supported; pass precomputed ``coeffs`` when sweeping x.
    """
    if coeffs is None:
        coeffs = _phi_coefficients(f, phi, fgrid)
    sel = _cone_mask(x, fgrid)
    if not np.any(sel):
        return 0.0
    return float(np.max(np.abs(coeffs[sel])))


def stein_inequality_check(
    f: SampledFunction,
    phi,
    mu: CoefficientMeasure,
    p: float,
    c_check: float = 10.0,
    n_base_points: int = 257,
) -> tuple[float, bool]:
    """Audit integral |<f, phi_(a,b)>|^p dmu <= C * integral Mf^p * Cmu dx.

    Returns (ratio, passed).  The base-space integral is a midpoint sum
    over ``n_base_points`` positions spanning the spatial box; the check
    passes when LHS/RHS <= c_check (a slack audit, not a sharp constant).
    A zero RHS with positive LHS fails outright.
    """
    if p <= 0.0:
        raise ValueError("p must be positive")
    fg = mu.fgrid
    coeffs = _phi_coefficients(f, phi, fg)
    lhs = float(np.sum(np.abs(coeffs) ** p * mu.masses))
    masses = tent_masses(mu)
    xs = np.linspace(-f.grid.L, f.grid.L, n_base_points)
    dx = xs[1] - xs[0]
    rhs = 0.0
    for x in xs:
        sel = _cone_mask(float(x), fg)
        if not np.any(sel):
            continue
        mf = float(np.max(np.abs(coeffs[sel])))
        cmu = float(np.max(masses[sel] / (2.0 * fg.a[sel])))
        rhs += mf**p * cmu * dx
    if rhs == 0.0:
        return (0.0, True) if lhs == 0.0 else (math.inf, False)
    ratio = lhs / rhs
    return ratio, ratio <= c_check


@dataclass(frozen=True)
class BMOExample:
    """Named symbol with its expected mean-oscillation class."""

    label: str
    evaluator: object
    expected_class: str  # "CMO", "BMO-not-CMO", or "neither-claimed"


def bmo_examples(grid: SpatialGrid) -> tuple[BMOExample, ...]:
    """Symbol examples: smooth CMO members and one BMO-not-CMO function.

    The logarithm's singularity is placed at x0 = h/3, off every grid
    node, so all samples are finite.
    """
    x0 = grid.h / 3.0

    def bump(center, width):
        def f(x):
            u = (np.asarray(x, dtype=float) - center) / width
            out = np.zeros_like(u)
            inside = np.abs(u) < 1.0
            out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
            return out

        return f

    return (
        BMOExample("zero", lambda x: np.zeros_like(np.asarray(x, dtype=float)), "CMO"),
        BMOExample("bump", bump(0.0, 2.0), "CMO"),
        BMOExample("bump_shifted", bump(-8.0, 1.5), "CMO"),
        BMOExample(
            "log_singular",
            lambda x: np.log(np.abs(np.asarray(x, dtype=float) - x0)),
            "BMO-not-CMO",
        ),
    )


def bmo_norm(f: SampledFunction, n_scales: int = 8) -> float:
    """Cross-check utility: max mean oscillation over a dyadic ball sweep."""
    grid = f.grid
    best = 0.0
    for k in range(n_scales):
        r = grid.L / 2.0**k
        w = min(max(int(round(r / grid.h)), 1), (grid.N - 1) // 2)
        kernel = np.ones(2 * w + 1) / (2 * w + 1)
        means = np.convolve(f.values, kernel, mode="same")
        osc = np.convolve(np.abs(f.values - means), kernel, mode="same")
        interior = slice(w, grid.N - w)
        if osc[interior].size:
            best = max(best, float(np.max(osc[interior])))
    return best
