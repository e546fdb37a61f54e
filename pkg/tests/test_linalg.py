import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qufti.errors import ArityError, ConfigurationError, DimensionError, ReferenceModeError
from qufti.linalg import (
    Interferometer,
    build_phase_layer,
    build_qft,
    compose_interferometer,
    expand_submatrix,
    is_unitary,
    unitarity_defect,
)

phase = st.floats(0.0, 2 * np.pi, allow_nan=False)


def test_qft_one_mode():
    assert np.allclose(build_qft(1), [[1]])


def test_qft_two_modes():
    assert np.allclose(build_qft(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def test_qft_four_modes_entry():
    assert np.isclose(build_qft(4)[1, 1], 0.5j)


def test_qft_zero_modes_rejected():
    with pytest.raises(DimensionError):
        build_qft(0)


@pytest.mark.parametrize("m", range(1, 9))
def test_qft_unitary(m):
    assert unitarity_defect(build_qft(m)) < 1e-12


def test_phase_layer_values():
    assert np.allclose(build_phase_layer(3, 2, [np.pi, np.pi / 2]), np.diag([-1, 1j, 1]))
    assert np.allclose(build_phase_layer(2, 1, [0.0]), np.eye(2))
    assert np.allclose(build_phase_layer(5, 4, [0.0] * 4), np.eye(5))


def test_phase_layer_errors():
    with pytest.raises(ReferenceModeError):
        build_phase_layer(3, 3, [0, 0, 0])
    with pytest.raises(ArityError):
        build_phase_layer(4, 3, [0, 0])


def test_compose_identity_phase():
    V = build_qft(5)
    assert np.allclose(compose_interferometer(V, np.eye(5)), np.eye(5))


def test_compose_dimension_mismatch():
    with pytest.raises(ArityError):
        compose_interferometer(build_qft(3), np.eye(4))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7).flatmap(lambda m: st.tuples(st.just(m), st.lists(phase, min_size=m - 1, max_size=m - 1))))
def test_composition_is_unitary(args):
    m, phases = args
    U = Interferometer(m, m - 1)(np.array(phases))
    assert is_unitary(U)


def test_expand_submatrix_all_ones_is_identity_map():
    U = build_qft(3)
    assert np.allclose(expand_submatrix(U, (1, 1, 1), (1, 1, 1)), U)


def test_expand_submatrix_repeats_row():
    U = build_qft(2)
    W = expand_submatrix(U, (1, 1), (2, 0))
    assert np.allclose(W[0], U[0]) and np.allclose(W[1], U[0])


def test_expand_submatrix_total_mismatch():
    with pytest.raises(ConfigurationError):
        expand_submatrix(build_qft(2), (1, 1), (1, 0))


def test_derivatives_match_finite_difference(rng):
    interf = Interferometer(4, 3)
    phi = rng.uniform(0, 2 * np.pi, 3)
    dU = interf.derivatives(phi)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        fd = (interf(phi + e) - interf(phi - e)) / (2 * h)
        assert np.allclose(dU[k], fd, atol=1e-8)
