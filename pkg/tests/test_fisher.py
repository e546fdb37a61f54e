import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qufti.detection import NRD, SPD, one_nrd
from qufti.errors import ReferenceModeError
from qufti.fisher import (
    FisherMatrix,
    classical_fisher,
    coherent_variance,
    fair_comparison,
    fisher_from_jacobian,
    probabilities_and_jacobian,
    qcrb_closed_form,
    qfi_inverse_closed_form,
    quantum_fisher_analytic,
    quantum_fisher_numeric,
    total_variance,
)
from qufti.linalg import Interferometer, build_qft

PATTERN = np.array([[2 / 3, -1 / 3], [-1 / 3, 2 / 3]])


def test_jacobian_m2_hand_value():
    labels, probs, jac = probabilities_and_jacobian(Interferometer(2, 1), (1, 1), NRD, [np.pi / 4])
    table = dict(zip(labels, jac[:, 0]))
    assert np.isclose(table[(1, 1)], -1.0)
    assert np.isclose(dict(zip(labels, probs))[(1, 1)], 0.5)


@pytest.mark.parametrize("scheme", [NRD, SPD])
@pytest.mark.parametrize("phi", [0.3, 1.1, 2.0, 4.4])
def test_cfi_m2_constant(scheme, phi):
    F = classical_fisher(Interferometer(2, 1), (1, 1), scheme, [phi])
    assert np.allclose(F.matrix, [[4.0]], atol=1e-10)


def test_cfi_zero_phases_singular():
    F = classical_fisher(Interferometer(3, 2), (1, 1, 1), NRD, [0.0, 0.0])
    assert total_variance(F).singular


@pytest.mark.parametrize("scheme", [NRD, SPD, one_nrd(1), one_nrd(2)])
def test_exact_jacobian_matches_finite_difference(scheme, rng):
    interf = Interferometer(4, 3)
    phi = rng.uniform(0, 2 * np.pi, 3)
    _, _, exact = probabilities_and_jacobian(interf, (1, 1, 1, 1), scheme, phi)
    _, _, fd = probabilities_and_jacobian(interf, (1, 1, 1, 1), scheme, phi, engine="fd")
    assert np.abs(exact - fd).max() < 1e-8


def test_qfi_numeric_examples():
    assert np.allclose(quantum_fisher_numeric(build_qft(2), (1, 1), 1), [[4.0]])
    assert np.allclose(quantum_fisher_numeric(build_qft(3), (1, 1, 1), 2), 8 * PATTERN)
    assert np.allclose(quantum_fisher_numeric(np.eye(3), (1, 1, 1), 2), 0)


def test_qfi_analytic_examples():
    assert np.allclose(quantum_fisher_analytic(3, 2, 1), 8 * PATTERN)
    assert np.allclose(quantum_fisher_analytic(2, 1, 1), [[4.0]])
    assert np.allclose(quantum_fisher_analytic(3, 2, 2), 24 * PATTERN)
    with pytest.raises(ReferenceModeError):
        quantum_fisher_analytic(3, 3)


def test_qfi_inverse_examples():
    assert np.allclose(qfi_inverse_closed_form(3, 2), np.array([[2, 1], [1, 2]]) / 8)
    assert np.allclose(qfi_inverse_closed_form(4, 3), (np.ones((3, 3)) + np.eye(3)) / 8)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m - 1), st.integers(1, 4))))
def test_qfi_inverse_property(args):
    m, d, k = args
    prod = quantum_fisher_analytic(m, d, k) @ qfi_inverse_closed_form(m, d, k)
    assert np.allclose(prod, np.eye(d), atol=1e-10)
    assert np.isclose(np.trace(qfi_inverse_closed_form(m, d, k)), qcrb_closed_form(m, d, k))


def test_total_variance_examples():
    assert np.isclose(total_variance(quantum_fisher_analytic(3, 2)).total_variance, 0.5)
    assert np.isclose(total_variance(2 * np.eye(3)).total_variance, 1.5)
    bound = total_variance(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert bound.singular and bound.total_variance == float("inf")
    assert np.isclose(total_variance(2 * np.eye(3), trials=3).total_variance, 0.5)


def test_degenerate_flag():
    F = fisher_from_jacobian([0.5, 0.5, 0.0], [[0.1], [-0.1], [0.2]])
    assert F.degenerate and total_variance(F).singular
    F = fisher_from_jacobian([0.5, 0.5, 0.0], [[0.1], [-0.1], [0.0]])
    assert not F.degenerate


def test_qcrb_examples():
    assert qcrb_closed_form(4, 3, 1, 1) == 0.75
    assert qcrb_closed_form(3, 2, 1, 1) == 0.5
    assert qcrb_closed_form(4, 3, 2, 1) == 0.25


def test_fair_comparison_examples():
    assert np.allclose(fair_comparison(4, 3), (0.25, 0.5, 0.75))
    assert np.allclose(fair_comparison(2, 1), (0.25, 0.25, 0.5))
    par, _, coh = fair_comparison(200, 199)
    assert 3.9 < coh / par < 4.0


def test_coherent_examples():
    assert coherent_variance(3, 12) == 0.75
    assert coherent_variance(3, 4) == 2.25
    assert coherent_variance(1, 1) == 1


@pytest.mark.parametrize("m", [3, 4])
def test_bound_ordering_random_point(m, rng):
    interf = Interferometer(m, m - 1)
    phi = rng.uniform(0, 2 * np.pi, m - 1)
    cfg = (1,) * m
    Fq = quantum_fisher_analytic(m, m - 1)
    Fn, Fo, Fs = (classical_fisher(interf, cfg, s, phi).matrix for s in (NRD, one_nrd(), SPD))
    assert np.linalg.eigvalsh(Fq - Fn).min() >= -1e-9
    assert np.linalg.eigvalsh(Fn - Fo).min() >= -1e-9
    assert np.linalg.eigvalsh(Fo - Fs).min() >= -1e-9
    assert total_variance(FisherMatrix(Fn)).total_variance >= qcrb_closed_form(m, m - 1) - 1e-9
