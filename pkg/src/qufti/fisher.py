"""Classical and quantum Fisher information, Cramer-Rao variances, comparator baselines."""

from dataclasses import dataclass

import numpy as np

from .detection import coarse_grain_arrays
from .fock import _check_cfg, amplitudes_and_gradients, clamp_probabilities, frame_state
from .fock import number_covariance_matrix
from .linalg import check_reference

P_FLOOR = 1e-12
DERIV_FLOOR = 1e-9
COND_MAX = 1e12
EIG_MIN = 1e-10
FD_STEP = 1e-5


@dataclass(frozen=True)
class FisherMatrix:
    matrix: np.ndarray
    degenerate: bool = False

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class VarianceBound:
    total_variance: float
    trials: int = 1
    singular: bool = False


def _outcome_probs(interferometer, in_cfg, scheme, phases, with_grad):
    U = interferometer(phases)
    dU = interferometer.derivatives(phases) if with_grad else None
    configs, amps, grads = amplitudes_and_gradients(U, in_cfg, dU)
    probs = clamp_probabilities(np.abs(amps) ** 2)
    jac = 2.0 * np.real(np.conj(amps)[:, None] * grads) if with_grad else None
    m, t = configs.shape[1], int(configs[0].sum())
    if jac is None:
        jac = np.zeros((len(probs), 0))
    return coarse_grain_arrays(probs, jac, m, t, scheme)


def outcome_probabilities(interferometer, in_cfg, scheme, phases):
    labels, probs, _ = _outcome_probs(interferometer, in_cfg, scheme, phases, False)
    return labels, probs


def probabilities_and_jacobian(interferometer, in_cfg, scheme, phases, engine="exact",
                               step=FD_STEP):
    """Outcome labels, probabilities and ``dp(x)/dphi_j`` for one detection scheme.

    ``engine="exact"`` differentiates the permanents analytically;
    ``engine="fd"`` uses central differences of width ``2*step``.
    """
    phases = np.asarray(phases, dtype=float).reshape(-1)
    in_cfg = _check_cfg(in_cfg)
    if engine == "exact":
        return _outcome_probs(interferometer, in_cfg, scheme, phases, True)
    if engine != "fd":
        raise ValueError(f"unknown engine {engine!r}")
    if not step > 0:
        raise ValueError(f"finite-difference step must be > 0, got {step}")
    labels, probs = outcome_probabilities(interferometer, in_cfg, scheme, phases)
    jac = np.empty((len(probs), phases.size))
    for j in range(phases.size):
        hi, lo = phases.copy(), phases.copy()
        hi[j] += step
        lo[j] -= step
        p_hi = outcome_probabilities(interferometer, in_cfg, scheme, hi)[1]
        p_lo = outcome_probabilities(interferometer, in_cfg, scheme, lo)[1]
        jac[:, j] = (p_hi - p_lo) / (2.0 * step)
    return labels, probs, jac


def probability_jacobian(interferometer, in_cfg, scheme, phases, engine="exact",
                         step=FD_STEP):
    return probabilities_and_jacobian(interferometer, in_cfg, scheme, phases, engine, step)[2]


def fisher_from_jacobian(probs, jac):
    """``sum_x dp_i dp_j / p`` with vanishing-probability terms handled.

    Outcomes with ``p < 1e-12`` are dropped; if any of them still has a
    derivative above 1e-9 the result is marked degenerate.
    """
    probs = np.asarray(probs, dtype=float)
    jac = np.asarray(jac, dtype=float)
    keep = probs >= P_FLOOR
    dropped = ~keep
    degenerate = bool(dropped.any() and (np.abs(jac[dropped]) >= DERIV_FLOOR).any())
    J = jac[keep]
    F = (J / probs[keep][:, None]).T @ J
    return FisherMatrix(0.5 * (F + F.T), degenerate)


def classical_fisher(interferometer, in_cfg, scheme, phases, engine="exact", step=FD_STEP):
    _, probs, jac = probabilities_and_jacobian(
        interferometer, in_cfg, scheme, phases, engine, step
    )
    return fisher_from_jacobian(probs, jac)


def quantum_fisher_numeric(V, in_cfg, d):
    """QFI from photon-number covariances of ``V^dagger |in>`` in the first ``d`` modes."""
    V = np.asarray(V, dtype=complex)
    m = V.shape[0]
    check_reference(m, d)
    return 4.0 * number_covariance_matrix(frame_state(V, in_cfg), d)


def _patterned(d, diag, off):
    return np.full((d, d), off, dtype=float) + (diag - off) * np.eye(d)


def quantum_fisher_analytic(m, d, k=1):
    """Closed-form QFI for ``k`` photons in every mode of a Fourier interferometer."""
    check_reference(m, d)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return 4.0 * k * (k + 1) * _patterned(d, (m - 1) / m, -1.0 / m)


def qfi_inverse_closed_form(m, d, k=1):
    check_reference(m, d)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    r = m - d
    return _patterned(d, (r + 1) / r, 1.0 / r) / (4.0 * k * (k + 1))


def total_variance(F, trials=1):
    """``Tr[F^-1] / trials``; singular matrices give ``inf`` with the flag set."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    degenerate = isinstance(F, FisherMatrix) and F.degenerate
    M = np.asarray(F, dtype=float)
    M = 0.5 * (M + M.T)
    if M.size == 0:
        return VarianceBound(float("inf"), trials, True)
    eig = np.linalg.eigvalsh(M)
    lo, hi = eig[0], eig[-1]
    if degenerate or lo < EIG_MIN or hi / lo > COND_MAX:
        return VarianceBound(float("inf"), trials, True)
    return VarianceBound(float(np.sum(1.0 / eig) / trials), trials, False)


def qcrb_closed_form(m, d, k=1, trials=1):
    check_reference(m, d)
    return d * (m - d + 1) / (m - d) / (4.0 * k * (k + 1)) / trials


def fair_comparison(m, d):
    """Total variances per unit of sequential repetitions, equal photon budget ``m*d``.

    Returns ``(parallel, sequential, coherent)``.
    """
    check_reference(m, d)
    parallel = (m - d + 1) / (8.0 * (m - d))
    sequential = m * d / (8.0 * (m - 1))
    coherent = coherent_variance(d, m * d)
    return parallel, sequential, coherent


def coherent_variance(d, mean_photons):
    if not mean_photons > 0:
        raise ValueError(f"mean photon number must be > 0, got {mean_photons}")
    return d * d / mean_photons
