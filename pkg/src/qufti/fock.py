"""Photon configurations, output amplitudes and number statistics."""

from dataclasses import dataclass
from functools import lru_cache
from math import factorial, sqrt

import numpy as np

from .errors import ConfigurationError, DimensionError, NumericalError
from .linalg import expand_submatrix
from .permanent import batch_amplitudes, permanent_ryser

NORM_TOL = 1e-10
CLAMP_TOL = 1e-14


def _compositions(m, t):
    if m == 1:
        yield (t,)
        return
    for first in range(t, -1, -1):
        for rest in _compositions(m - 1, t - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _config_array(m, t):
    arr = np.array(list(_compositions(m, t)), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def enumerate_configs(m, t):
    """All occupations of ``m`` modes with ``t`` photons, lexicographically descending."""
    if m < 1:
        raise DimensionError(f"mode count must be >= 1, got {m}")
    if t < 0:
        raise ConfigurationError(f"photon total must be >= 0, got {t}")
    return [tuple(int(x) for x in row) for row in _config_array(int(m), int(t))]


def _check_cfg(cfg, m=None):
    cfg = np.asarray(cfg, dtype=np.int64).reshape(-1)
    if (cfg < 0).any():
        raise ConfigurationError(f"negative occupation in {cfg.tolist()}")
    if m is not None and cfg.size != m:
        raise ConfigurationError(f"configuration {cfg.tolist()} does not have {m} modes")
    return cfg


def _fact_prod(cfg):
    out = 1
    for n in cfg:
        out *= factorial(int(n))
    return out


def amplitude(U, in_cfg, out_cfg):
    """Transition amplitude ``perm(W) / sqrt(prod in! * prod out!)``."""
    W = expand_submatrix(U, in_cfg, out_cfg)
    norm = sqrt(_fact_prod(in_cfg) * _fact_prod(out_cfg))
    return permanent_ryser(W) / norm


@lru_cache(maxsize=None)
def _layout(in_key):
    """Row/column index tables for every output configuration of one input."""
    in_cfg = np.array(in_key, dtype=np.int64)
    m, t = in_cfg.size, int(in_cfg.sum())
    configs = _config_array(m, t)
    in_idx = np.repeat(np.arange(m), in_cfg)
    rows = np.array([np.repeat(np.arange(m), c) for c in configs], dtype=np.int64)
    rows = rows.reshape(len(configs), t)
    in_fact = _fact_prod(in_cfg)
    norms = np.array([sqrt(in_fact * _fact_prod(c)) for c in configs])
    return configs, in_idx, rows, norms


@dataclass(frozen=True)
class FockState:
    """Pure state with a fixed photon total, amplitudes aligned with ``configs``."""

    configs: np.ndarray
    amplitudes: np.ndarray

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    @property
    def photons(self):
        return int(self.configs[0].sum()) if len(self.configs) else 0

    def amplitude_of(self, cfg):
        idx = np.flatnonzero((self.configs == np.asarray(cfg)).all(axis=1))
        if idx.size == 0:
            raise ConfigurationError(f"{tuple(cfg)} not in the support")
        return complex(self.amplitudes[idx[0]])

    def norm(self):
        return float(np.sum(self.probabilities))


@dataclass(frozen=True)
class OutcomeDistribution:
    outcomes: list
    probabilities: np.ndarray

    def as_dict(self):
        return dict(zip(self.outcomes, self.probabilities.tolist()))

    def __len__(self):
        return len(self.outcomes)


def amplitudes_and_gradients(U, in_cfg, dU=None):
    """Amplitudes of every output configuration and their derivatives along ``dU``.

    Returns ``(configs, amps, grads)`` with ``grads`` of shape ``(N, d)``.
    """
    U = np.asarray(U, dtype=complex)
    m = U.shape[0]
    in_cfg = _check_cfg(in_cfg, m)
    configs, in_idx, rows, norms = _layout(tuple(int(x) for x in in_cfg))
    if dU is None:
        dU = np.zeros((0, m, m), dtype=complex)
    amps, grads = batch_amplitudes(U, dU, in_idx, rows, norms)
    return configs, amps, grads


def output_distribution(U, in_cfg):
    """Output state ``U|in_cfg>`` over every configuration with the same photon total."""
    in_cfg = _check_cfg(in_cfg, np.asarray(U).shape[0])
    if in_cfg.sum() < 1:
        raise ConfigurationError("input must carry at least one photon")
    configs, amps, _ = amplitudes_and_gradients(U, in_cfg)
    return FockState(configs, amps)


def frame_state(V, in_cfg):
    """State ``V^dagger |in_cfg>``: the input as seen by the phase layer."""
    V = np.asarray(V, dtype=complex)
    return output_distribution(V.conj().T, in_cfg)


def clamp_probabilities(p):
    """Zero tiny negatives from rounding; larger negatives are an error."""
    p = np.asarray(p, dtype=float)
    if (p < -CLAMP_TOL).any():
        raise NumericalError(f"negative probability {p.min():.3e}")
    return np.where(p < 0.0, 0.0, p)


def number_covariance(state, l, n):
    """Covariance of photon numbers in modes ``l`` and ``n`` (1-based)."""
    m = state.configs.shape[1]
    for idx in (l, n):
        if not 1 <= idx <= m:
            raise IndexError(f"mode index {idx} outside 1..{m}")
    p = state.probabilities
    nl = state.configs[:, l - 1].astype(float)
    nn = state.configs[:, n - 1].astype(float)
    return float(np.sum(p * nl * nn) - np.sum(p * nl) * np.sum(p * nn))


def number_covariance_matrix(state, d=None):
    """Covariance matrix of the photon numbers in the first ``d`` modes."""
    m = state.configs.shape[1]
    d = m if d is None else d
    p = state.probabilities
    N = state.configs[:, :d].astype(float)
    mean = p @ N
    return (N * p[:, None]).T @ N - np.outer(mean, mean)
