"""Tail coefficient-energy functional via power iteration, and spectra."""

import math

import numpy as np
import pytest
import scipy.linalg

from czframe.compactness import (
    analysis_operator,
    operator_matrix,
    rk_tail,
    singular_spectrum,
    tail_functional,
    tail_verdict,
)
from czframe.grids import SpatialGrid, make_frame_grid
from czframe.operators import get_model
from czframe.wavelets import make_mother_wavelet


@pytest.fixture(scope="module")
def psi():
    return make_mother_wavelet()


@pytest.fixture(scope="module")
def small_grid():
    return SpatialGrid(32.0, 256)


@pytest.fixture(scope="module")
def small_fgrid(small_grid):
    return make_frame_grid(small_grid, 0.5, 64.0, s=0.25)


def test_analysis_operator_rows_are_scaled_frame_elements(psi, small_grid, small_fgrid):
    from czframe.geometry import GroupPoint
    from czframe.wavelets import frame_element

    S = analysis_operator(psi, small_fgrid, small_grid)
    assert S.shape == (small_fgrid.n_nodes, small_grid.N)
    for i in (0, small_fgrid.n_nodes // 2, small_fgrid.n_nodes - 1):
        pt = GroupPoint(float(small_fgrid.a[i]), float(small_fgrid.b[i]))
        el = frame_element(psi, pt, small_grid)
        expected = math.sqrt(small_fgrid.dlam[i]) * small_grid.h * el.values
        assert np.allclose(S[i].toarray().ravel(), expected, atol=1e-14)


def test_rk_value_matches_dense_svd(psi, small_grid, small_fgrid):
    # oracle: sigma_max^2 of the explicitly assembled composite matrix
    A = operator_matrix(get_model("damped_hilbert_1").kernel, small_grid)
    S = analysis_operator(psi, small_fgrid, small_grid)
    res = rk_tail(A, S, small_fgrid, small_grid, 0.0)
    M = np.asarray(S @ A) / math.sqrt(small_grid.h)
    dense = float(scipy.linalg.svdvals(M)[0] ** 2)
    assert res.converged
    assert abs(res.value - dense) / dense < 1e-3


def test_rk_witness_is_extremal(psi, small_grid, small_fgrid):
    # the returned witness attains the reported value up to tolerance
    A = operator_matrix(get_model("damped_hilbert_1").kernel, small_grid)
    S = analysis_operator(psi, small_fgrid, small_grid)
    res = rk_tail(A, S, small_fgrid, small_grid, 1.0)
    u = res.witness.values
    norm2 = float(u @ u) * small_grid.h
    c = S[np.asarray(small_fgrid.dist0 >= 1.0)] @ (A @ u)
    energy = float(c @ c)
    assert abs(energy / norm2 - res.value) / res.value < 1e-3


def test_rk_seed_determinism(psi, small_grid, small_fgrid):
    A = operator_matrix(get_model("damped_hilbert_1").kernel, small_grid)
    S = analysis_operator(psi, small_fgrid, small_grid)
    r1 = rk_tail(A, S, small_fgrid, small_grid, 0.5, seed=3)
    r2 = rk_tail(A, S, small_fgrid, small_grid, 0.5, seed=3)
    assert r1.value == r2.value
    assert np.array_equal(r1.witness.values, r2.witness.values)


def test_tail_functional_profiles(psi, small_grid, small_fgrid):
    radii = np.arange(0.0, 6.5, 0.5)
    A0 = operator_matrix(get_model("zero").kernel, small_grid)
    tz = tail_functional(A0, psi, small_fgrid, small_grid, radii, label="zero")
    assert np.all(tz.values == 0.0)
    assert tz.verdict == "vanishing"

    Af = operator_matrix(get_model("finite_rank").kernel, small_grid)
    tf = tail_functional(Af, psi, small_fgrid, small_grid, radii, label="finite_rank")
    assert tf.values[0] > 0.0
    assert tf.ratio() < 1e-2
    assert tf.verdict == "vanishing"

    Ah = operator_matrix(get_model("hilbert").kernel, small_grid)
    th = tail_functional(Ah, psi, small_fgrid, small_grid, radii, label="hilbert")
    assert th.ratio() > 0.1
    assert th.verdict == "non-vanishing"


def test_tail_functional_radii_validation(psi, small_grid, small_fgrid):
    A = operator_matrix(get_model("zero").kernel, small_grid)
    with pytest.raises(ValueError):
        tail_functional(A, psi, small_fgrid, small_grid, [0.0, 0.0, 1.0])


def test_tail_verdict_rules():
    assert tail_verdict(np.array([0.0, 0.0])) == "vanishing"
    assert tail_verdict(np.array([1.0, 1e-3])) == "vanishing"
    assert tail_verdict(np.array([1.0, 0.5])) == "non-vanishing"
    assert tail_verdict(np.array([1.0, 0.05])) == "inconclusive"


def test_singular_spectrum_finite_rank(small_grid):
    A = operator_matrix(get_model("finite_rank").kernel, small_grid)
    sv = singular_spectrum(A, 4)
    assert sv[0] > 0.0
    assert sv[1] / sv[0] < 1e-12  # exactly rank one up to roundoff
    with pytest.raises(ValueError):
        singular_spectrum(A, 0)


def test_singular_spectrum_hilbert_flat(small_grid):
    # discretized Hilbert transform is near-unitary: flat leading spectrum
    A = operator_matrix(get_model("hilbert").kernel, small_grid)
    sv = singular_spectrum(A, 32)
    assert np.all(sv <= 1.05)
    assert np.all(sv >= 0.8)


def test_damped_spectrum_shrinks_with_domain_enlargement(small_grid):
    # fixed sample count, growing box: the relative singular-value tail of the
    # damped kernel shrinks, unlike the undamped one
    ratios = []
    for L in (32.0, 64.0):
        g = SpatialGrid(L, 512)
        A = operator_matrix(get_model("damped_hilbert_1").kernel, g)
        sv = scipy.linalg.svdvals(A)
        ratios.append(sv[16] / sv[0])
    assert ratios[1] < ratios[0]
