"""Paraproduct identities, adjointness, compactness dichotomy, decomposition."""

import math

import numpy as np
import pytest

from czframe.grids import SampledFunction, SpatialGrid, inner_product, l2_norm, make_frame_grid
from czframe.operators import get_model
from czframe.paraproducts import (
    Decomposition,
    decompose,
    make_bump_phi,
    make_symbol,
    paraproduct_adjoint_apply,
    paraproduct_adjoint_apply_to_constant,
    paraproduct_apply,
    paraproduct_apply_to_constant,
    paraproduct_compactness,
    paraproduct_matrix,
)
from czframe.wavelets import analyze, make_mother_wavelet, synthesize


@pytest.fixture(scope="module")
def psi():
    return make_mother_wavelet()


@pytest.fixture(scope="module")
def phi():
    return make_bump_phi()


@pytest.fixture(scope="module")
def grid():
    return SpatialGrid(32.0, 2048)


@pytest.fixture(scope="module")
def fgrid(grid):
    return make_frame_grid(grid, 0.0625, 512.0, s=0.125, cone_factor=1.0)


def _bump(center, width):
    def f(x):
        u = (np.asarray(x, dtype=float) - center) / width
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    return f


def test_bump_phi_shape(phi):
    xs = np.linspace(-2.0, 2.0, 2001)
    vals = phi(xs)
    assert np.all(vals[np.abs(xs) <= 0.5] == 1.0)  # plateau
    assert np.all(vals[np.abs(xs) >= 1.0] == 0.0)  # compact support
    assert np.all((vals >= 0.0) & (vals <= 1.0))
    assert np.allclose(vals, phi(-xs))  # even
    # m_phi is the integral of phi
    assert phi.m_phi == pytest.approx(float(np.trapezoid(vals, xs)), abs=1e-6)


def test_apply_to_constant_reproduces_scaled_symbol(psi, phi, grid, fgrid):
    beta = SampledFunction.from_callable(grid, _bump(0.0, 2.0))
    sym = make_symbol(beta, psi, fgrid)
    out = paraproduct_apply_to_constant(sym, phi, psi, grid)
    # P_beta 1 = m_phi * (lattice reconstruction of beta) exactly
    rec = synthesize(analyze(beta, psi, fgrid), psi, grid)
    assert np.max(np.abs(out.values - phi.m_phi * rec.values)) < 1e-12
    # and approximately m_phi * beta at frame accuracy
    rel = l2_norm(SampledFunction(grid, out.values - phi.m_phi * beta.values)) / (
        phi.m_phi * l2_norm(beta)
    )
    assert rel < 0.05


def test_adjoint_kills_constants(psi, phi, grid, fgrid):
    beta = SampledFunction.from_callable(grid, _bump(0.0, 2.0))
    sym = make_symbol(beta, psi, fgrid)
    out = paraproduct_adjoint_apply_to_constant(sym, phi, psi, grid)
    assert np.max(np.abs(out.values)) <= 1e-9


def test_adjointness(psi, phi, grid, fgrid):
    beta = SampledFunction.from_callable(grid, _bump(0.0, 2.0))
    sym = make_symbol(beta, psi, fgrid)
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    g = SampledFunction.from_callable(grid, lambda x: np.exp(-(((x - 1.0) / 2.0) ** 2)))
    lhs = inner_product(paraproduct_apply(sym, f, phi, psi), g)
    rhs = inner_product(f, paraproduct_adjoint_apply(sym, g, phi, psi))
    assert abs(lhs - rhs) < 1e-10


def test_matrix_matches_apply(psi, phi, fgrid):
    small = SpatialGrid(32.0, 512)
    sfg = make_frame_grid(small, 0.25, 16.0, s=0.25)
    beta = SampledFunction.from_callable(small, _bump(0.0, 2.0))
    sym = make_symbol(beta, psi, sfg)
    A = paraproduct_matrix(sym, phi, psi, small)
    f = SampledFunction.from_callable(small, lambda x: np.exp(-(x**2)))
    direct = paraproduct_apply(sym, f, phi, psi)
    assert np.max(np.abs(A @ f.values - direct.values)) < 1e-10


def test_compactness_dichotomy(psi, phi):
    # smooth compactly supported symbol -> vanishing tails; log symbol -> not
    big = SpatialGrid(2048.0, 4096)
    pfg = make_frame_grid(big, 2.0, 1024.0, s=0.25, L_b=1024.0, cone_factor=0.0)
    radii = np.arange(0.0, 5.5, 1.0)
    beta_c = SampledFunction.from_callable(big, _bump(0.0, 2.0))
    tf_c, spec_c = paraproduct_compactness(beta_c, phi, psi, pfg, radii, keep_witnesses=False)
    assert tf_c.ratio() < 1e-2
    x0 = big.h / 3.0
    beta_l = SampledFunction.from_callable(big, lambda x: np.log(np.abs(x - x0)))
    tf_l, spec_l = paraproduct_compactness(beta_l, phi, psi, pfg, radii, keep_witnesses=False)
    assert tf_l.ratio() > 0.1
    assert spec_c[0] > 0.0 and spec_l[0] > 0.0


def test_decompose_hilbert_s_equals_t(psi, phi, grid, fgrid):
    # T1 = T*1 = 0 for the Hilbert kernel, so both symbols vanish and S = T
    dec = decompose(get_model("hilbert").kernel, phi, psi, fgrid, grid)
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    s = dec.apply_s(f)
    t = dec.apply_t(f)
    assert np.max(np.abs(s.values - t.values)) < 1e-9


def test_decompose_reconstruction_exact(psi, phi, grid, fgrid):
    # T = S + P1 + P2* holds by construction, bitwise
    dec = decompose(get_model("damped_hilbert_1").kernel, phi, psi, fgrid, grid)
    rng = np.random.default_rng(5)
    f = SampledFunction(grid, rng.standard_normal(grid.N) * np.exp(-((grid.x / 8.0) ** 2)))
    total = dec.apply_s(f).values + dec.apply_p1(f).values + dec.apply_p2_adjoint(f).values
    assert np.max(np.abs(total - dec.apply_t(f).values)) < 1e-12


def test_decompose_s1_small_against_wavelets(psi, phi, grid, fgrid):
    # S1 pairs to near zero against well-resolved wavelets, relative to the
    # corresponding T1 pairings
    from czframe.geometry import GroupPoint
    from czframe.wavelets import frame_element

    dec = decompose(get_model("damped_hilbert_1").kernel, phi, psi, fgrid, grid)
    s1 = dec.s_applied_to_constant()
    t1 = dec.t1
    pts = [GroupPoint(a, b) for a in (0.5, 1.0, 2.0) for b in (0.0, 4.0)]
    num = max(abs(inner_product(s1, frame_element(psi, p, grid))) for p in pts)
    den = max(abs(inner_product(t1, frame_element(psi, p, grid))) for p in pts)
    assert num / den < 0.05
