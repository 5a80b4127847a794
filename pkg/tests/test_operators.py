"""Model kernels, principal-value quadrature, T1, and conjugation symmetry."""

import math

import numpy as np
import pytest

from czframe.geometry import GroupPoint
from czframe.grids import SampledFunction, SpatialGrid
from czframe.operators import (
    apply_kernel,
    compute_T1,
    compute_T1star,
    conjugate,
    finite_rank_factors,
    get_model,
    kernel_matrix,
    model_zoo,
    transpose,
    truncation_tail_bound,
)


@pytest.fixture(scope="module")
def grid():
    return SpatialGrid(32.0, 2048)


def test_zoo_labels():
    zoo = model_zoo()
    assert set(zoo) == {"hilbert", "damped_hilbert_05", "damped_hilbert_1", "finite_rank", "zero"}
    with pytest.raises(KeyError):
        get_model("nonsense")


def test_hilbert_of_gaussian_matches_dawson(grid):
    # H[exp(-x^2)](x) = 2 Dawson(x) / sqrt(pi)  (closed form via scipy.special)
    import scipy.special

    kern = get_model("hilbert").kernel
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    Hf = apply_kernel(kern, f)
    exact = 2.0 * scipy.special.dawsn(grid.x) / math.sqrt(math.pi)
    mask = np.abs(grid.x) <= 16.0
    rel = np.max(np.abs(Hf.values[mask] - exact[mask])) / np.max(np.abs(exact))
    assert rel < 0.02


def test_kernel_matrix_diagonal_policy(grid):
    sing = kernel_matrix(get_model("hilbert").kernel, grid)
    assert np.all(np.diag(sing) == 0.0)
    fr = kernel_matrix(get_model("finite_rank").kernel, grid)
    u, v = finite_rank_factors()
    assert np.allclose(np.diag(fr), u(grid.x) * v(grid.x))
    # bounded diagonal keeps the kernel exactly rank one
    assert np.linalg.matrix_rank(fr, tol=1e-10) == 1


def test_pv_diagonal_exclusion_requires_structure(grid):
    from czframe.operators import CZKernel

    bad = CZKernel("bad", lambda x, y: x + y, c_k=1.0, delta=1.0)
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    with pytest.raises(ValueError):
        apply_kernel(bad, f)


def test_finite_rank_application_factorizes(grid):
    kern = get_model("finite_rank").kernel
    u, v = finite_rank_factors()
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    Tf = apply_kernel(kern, f)
    scalar = np.sum(v(grid.x) * f.values) * grid.h
    assert np.allclose(Tf.values, scalar * u(grid.x), atol=1e-14)


def test_t1_hilbert_vanishes(grid):
    t1, err = compute_T1(get_model("hilbert").kernel, grid)
    assert np.max(np.abs(t1.values)) < 1e-12
    assert err == truncation_tail_bound(get_model("hilbert").kernel, grid)


def test_t1_finite_rank_is_integral_times_factor(grid):
    kern = get_model("finite_rank").kernel
    u, v = finite_rank_factors()
    t1, _ = compute_T1(kern, grid)
    iv = np.sum(v(grid.x)) * grid.h
    # away from box edges the symmetric window covers supp v entirely
    mask = np.abs(grid.x) <= 16.0
    assert np.max(np.abs(t1.values[mask] - iv * u(grid.x)[mask])) < 1e-12


def test_t1star_is_t1_of_transpose(grid):
    kern = get_model("damped_hilbert_1").kernel
    a, _ = compute_T1star(kern, grid)
    b, _ = compute_T1(transpose(kern), grid)
    assert np.array_equal(a.values, b.values)


def test_t1_tol_fails_fast(grid):
    with pytest.raises(ValueError):
        compute_T1(get_model("damped_hilbert_1").kernel, grid, tol=1e-12)


def test_conjugation_identity_fixed_point():
    kern = get_model("hilbert").kernel
    cj = conjugate(kern, GroupPoint(3.0, -2.0))
    x = np.linspace(-4, 4, 101)[:, None]
    y = np.linspace(-4, 4, 101)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = cj(x, y) - kern(x, y)
    off = ~np.isclose(x, y)
    # dilation-translation invariance: the Hilbert kernel is a fixed point
    assert np.max(np.abs(diff[np.broadcast_to(off, diff.shape)])) < 1e-13


def test_conjugation_scaling_rule():
    kern = get_model("finite_rank").kernel
    g = GroupPoint(2.0, 1.0)
    cj = conjugate(kern, g)
    x, y = np.array([0.3]), np.array([0.7])
    assert np.allclose(cj(x, y), g.a * kern(g.a * x + g.b, g.a * y + g.b))


def test_zero_kernel(grid):
    kern = get_model("zero").kernel
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    assert np.all(apply_kernel(kern, f).values == 0.0)
