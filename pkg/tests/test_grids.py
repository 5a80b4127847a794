"""Spatial grid, sampled functions, and frame lattice construction."""

import numpy as np
import pytest

from czframe.grids import (
    FrameGrid,
    GridMismatchError,
    SampledFunction,
    SpatialGrid,
    inner_product,
    l2_norm,
    make_frame_grid,
    tail_nodes,
)


@pytest.fixture(scope="module")
def grid():
    return SpatialGrid(32.0, 2048)


def test_spatial_grid_basics(grid):
    assert grid.h == 2.0 * 32.0 / 2048
    assert grid.x.shape == (2048,)
    assert grid.x[0] == -32.0
    assert np.allclose(np.diff(grid.x), grid.h)


def test_spatial_grid_validation():
    with pytest.raises(ValueError):
        SpatialGrid(32.0, 8)
    with pytest.raises(ValueError):
        SpatialGrid(-1.0, 256)


def test_inner_product_and_norm(grid):
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
    # integral exp(-2 x^2) = sqrt(pi/2)
    assert abs(l2_norm(f) ** 2 - np.sqrt(np.pi / 2.0)) < 1e-10
    g = SampledFunction.from_callable(grid, lambda x: x * np.exp(-(x**2)))
    # odd times even integrates to zero
    assert abs(inner_product(f, g)) < 1e-12


def test_grid_mismatch_rejected(grid):
    other = SpatialGrid(32.0, 1024)
    f = SampledFunction(grid, np.zeros(grid.N))
    g = SampledFunction(other, np.zeros(other.N))
    with pytest.raises(GridMismatchError):
        inner_product(f, g)


def test_sampled_function_shape_validation(grid):
    with pytest.raises(ValueError):
        SampledFunction(grid, np.zeros(17))


def test_frame_grid_preconditions(grid):
    with pytest.raises(ValueError):
        make_frame_grid(grid, grid.h, 16.0)  # below 2h resolution limit
    with pytest.raises(ValueError):
        make_frame_grid(grid, 0.25, 16.0, s=0.0)
    with pytest.raises(ValueError):
        make_frame_grid(grid, 0.25, 16.0, s=1.5)


def test_frame_grid_structure(grid):
    fg = make_frame_grid(grid, 0.25, 16.0, s=0.25)
    assert fg.n_nodes == len(fg.a) == len(fg.b) == len(fg.dlam)
    assert np.all(fg.a >= 0.25) and np.all(fg.a <= 16.0)
    assert np.all(fg.dlam > 0.0)
    # scale_slice partitions the nodes
    total = sum(fg.scale_slice(j).stop - fg.scale_slice(j).start for j in range(len(fg.scales)))
    assert total == fg.n_nodes
    # per-node Haar weight is du * s at every node
    assert np.allclose(fg.dlam, fg.du * fg.s)


def test_tail_nodes_nested(grid):
    fg = make_frame_grid(grid, 0.25, 16.0, s=0.25)
    m1 = tail_nodes(fg, 1.0)
    m2 = tail_nodes(fg, 2.0)
    assert np.all(m2 <= m1)  # larger radius excludes more nodes
    assert np.array_equal(tail_nodes(fg, 0.0), np.ones(fg.n_nodes, dtype=bool))


def test_cone_extension_widens_translation_range(grid):
    fg0 = make_frame_grid(grid, 0.25, 16.0, s=0.25, L_b=16.0, cone_factor=0.0)
    fg1 = make_frame_grid(grid, 0.25, 16.0, s=0.25, L_b=16.0, cone_factor=1.0)
    assert np.max(np.abs(fg1.b)) > np.max(np.abs(fg0.b))
