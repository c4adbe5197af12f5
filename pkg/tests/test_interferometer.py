import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genmz import hw, interferometer as ifm, multiport, numerics
from genmz.errors import DomainError, UnsupportedDimensionError

angles = st.floats(-20, 20, allow_nan=False)


def test_phase_vector_wraps():
    p = ifm.PhaseVector([-0.5, 2 * math.pi + 0.25, 0.0])
    assert p.angles == pytest.approx((2 * math.pi - 0.5, 0.25, 0.0))
    assert p.dim == 3 and len(p) == 3
    with pytest.raises(DomainError):
        ifm.PhaseVector([1.0])
    with pytest.raises(DomainError):
        ifm.PhaseVector([1.0, math.inf])


@pytest.mark.parametrize("d", [2, 3, 4])
def test_weyl_phase_layer_equals_diagonal(d, rng):
    for a in rng.uniform(0, 2 * math.pi, size=(10, d)):
        assert numerics.unitary_distance(ifm.phase_layer(a), ifm.phase_layer_weyl(a)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_mz_unitary_unitary_and_trivial_at_zero(d, rng):
    assert np.allclose(ifm.mz_unitary(np.zeros(d)), np.eye(d), atol=1e-13)
    U = ifm.mz_unitary(rng.uniform(0, 2 * math.pi, d))
    assert numerics.unitarity_residual(U) < 1e-13


def test_mz_unitary_equal_phases_is_global_phase():
    U = ifm.mz_unitary([0.7, 0.7, 0.7])
    assert np.allclose(U, np.exp(0.7j) * np.eye(3), atol=1e-14)


@pytest.mark.parametrize(
    "d, spectrum",
    [(2, [0, 1]), (3, [-1 / 3, -1 / 3, 2 / 3]), (4, [-1 / 4, -1 / 4, -1 / 4, 3 / 4])],
)
def test_generator_spectra(d, spectrum):
    gens = ifm.phase_generators(d)
    for h in gens.hamiltonians:
        w, _ = numerics.hermitian_eigensystem(h)
        assert np.max(np.abs(w - spectrum)) <= 1e-10
    if d == 3:
        assert np.max(np.abs(sum(gens.hamiltonians))) <= 1e-12


def test_generator_sources():
    assert ifm.phase_generators(2).source == "weyl"
    assert ifm.phase_generators(3).source == "weyl"
    # the closed d=4 formulas do not reproduce the interferometer
    assert ifm.phase_generators(4).source == "constructive"
    assert ifm.generator_residual(ifm.GeneratorSet(4, ifm._weyl_generators(4), "weyl")) > 1e-3


@pytest.mark.parametrize("d", [2, 3, 4])
def test_generators_commute(d):
    hs = ifm.phase_generators(d).hamiltonians
    for a in hs:
        for b in hs:
            assert np.max(np.abs(a @ b - b @ a)) < 1e-13


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.lists(angles, min_size=4, max_size=4))
def test_exp_consistency(d, a):
    a = np.array(a[:d])
    gens = ifm.phase_generators(d)
    assert numerics.unitary_distance(ifm.mz_unitary(a), gens.generate(a)) <= 1e-9


def test_generators_unsupported():
    with pytest.raises(UnsupportedDimensionError):
        ifm.phase_generators(5)


def test_preparation_diagonalises_y():
    U3 = ifm.preparation_unitary(3)
    assert numerics.is_unitary(U3)
    assert np.allclose(U3.conj().T @ hw.weyl_operator("Y", 3) @ U3, hw.clock(3), atol=1e-14)
    assert numerics.is_unitary(ifm.preparation_unitary(4))
    with pytest.raises(UnsupportedDimensionError):
        ifm.preparation_unitary(5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4]), st.lists(angles, min_size=4, max_size=4))
def test_station_matches_closed_form(d, a):
    a = np.array(a[:d])
    M, C = ifm.station_matrix(a), ifm.station_matrix_closed(a)
    assert numerics.unitary_distance(M, C) <= 1e-9
    # the displayed prefactor exp(-i sum(a)/d) is the only difference
    assert np.max(np.abs(M - np.exp(1j * a.sum() / d) * C)) <= 1e-9


def test_station_is_symmetric_multiport_for_any_phase(rng):
    for d in (3, 4):
        M = ifm.station_matrix(rng.uniform(0, 2 * math.pi, d))
        assert multiport.symmetry_residual(M) < 1e-12


def test_rotated_eigenvalues():
    lam3 = ifm.rotated_eigenvalues(3)
    # every row is a permutation of (2/3, -1/3, -1/3) and each GHZ component
    # carries exactly one 2/3
    assert np.allclose(np.sort(lam3, axis=1), [[-1 / 3, -1 / 3, 2 / 3]] * 3)
    assert np.allclose(np.sort(lam3, axis=0), [[-1 / 3] * 3, [-1 / 3] * 3, [2 / 3] * 3])
    lam4 = ifm.rotated_eigenvalues(4)
    assert np.allclose(np.sort(lam4, axis=1), [[-0.25, -0.25, -0.25, 0.75]] * 4)
    lam3[0, 0] = 99.0  # the cache hands out copies
    assert ifm.rotated_eigenvalues(3)[0, 0] != 99.0


def test_collective_eigenvalue():
    lam = ifm.rotated_eigenvalues(3)
    assert ifm.collective_eigenvalue(3, 1, 2, 5) == pytest.approx(5 * lam[1, 2])
    with pytest.raises(DomainError):
        ifm.collective_eigenvalue(3, 3, 0, 1)
    with pytest.raises(UnsupportedDimensionError):
        ifm.collective_eigenvalue(2, 0, 0, 1)
