"""Interferometer unitaries: Fourier matrix, phase layer, conjugated composition."""

import numpy as np

from .errors import ArityError, ConfigurationError, DimensionError, ReferenceModeError

UNITARITY_TOL = 1e-12


def unitarity_defect(M):
    """Max-norm of ``M^dagger M - I``."""
    M = np.asarray(M)
    return float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))))


def is_unitary(M, tol=UNITARITY_TOL):
    M = np.asarray(M)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and unitarity_defect(M) < tol


def check_reference(m, d):
    if m < 1:
        raise DimensionError(f"mode count must be >= 1, got {m}")
    if d < 1:
        raise DimensionError(f"number of phases must be >= 1, got {d}")
    if d >= m:
        raise ReferenceModeError(
            f"d={d} phases in m={m} modes leaves no reference mode (need d < m)"
        )


def build_qft(m):
    """Discrete Fourier unitary, entry (i, j) = exp(2 pi i (i-1)(j-1) / m) / sqrt(m)."""
    m = int(m)
    if m < 1:
        raise DimensionError(f"mode count must be >= 1, got {m}")
    idx = np.arange(m)
    # reduce the exponent mod m before scaling so large products stay exact
    expo = np.outer(idx, idx) % m
    return np.exp(2j * np.pi * expo / m) / np.sqrt(m)


def build_phase_layer(m, d, phases):
    """Diagonal phase matrix: ``exp(i phi_k)`` on the first ``d`` modes, 1 elsewhere."""
    check_reference(m, d)
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size != d:
        raise ArityError(f"expected {d} phases, got {phases.size}")
    diag = np.ones(m, dtype=complex)
    diag[:d] = np.exp(1j * phases)
    return np.diag(diag)


def compose_interferometer(V, Phi):
    """Return ``V @ Phi @ V^dagger``."""
    V = np.asarray(V, dtype=complex)
    Phi = np.asarray(Phi, dtype=complex)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape != Phi.shape:
        raise ArityError(f"shape mismatch: V {V.shape}, Phi {Phi.shape}")
    return V @ Phi @ V.conj().T


def _repeat_indices(cfg):
    cfg = np.asarray(cfg, dtype=np.int64)
    return np.repeat(np.arange(cfg.size), cfg)


def expand_submatrix(U, in_cfg, out_cfg):
    """Transition submatrix between two photon configurations.

    Row ``j`` of ``U`` is repeated ``out_cfg[j]`` times and column ``l`` is
    repeated ``in_cfg[l]`` times, both in ascending mode order.
    """
    U = np.asarray(U)
    in_cfg = np.asarray(in_cfg, dtype=np.int64)
    out_cfg = np.asarray(out_cfg, dtype=np.int64)
    m = U.shape[0]
    if in_cfg.size != m or out_cfg.size != m:
        raise ConfigurationError(
            f"configurations must have {m} modes, got {in_cfg.size} and {out_cfg.size}"
        )
    if (in_cfg < 0).any() or (out_cfg < 0).any():
        raise ConfigurationError("occupations must be non-negative")
    if in_cfg.sum() != out_cfg.sum():
        raise ConfigurationError(
            f"photon totals differ: in {in_cfg.sum()}, out {out_cfg.sum()}"
        )
    return U[np.ix_(_repeat_indices(out_cfg), _repeat_indices(in_cfg))]


class Interferometer:
    """``U(phi) = V Phi(phi) V^dagger`` with ``d`` phases on the first modes.

    ``V`` defaults to the Fourier matrix (the parallel QuFTI).
    """

    def __init__(self, m, d, V=None):
        check_reference(m, d)
        self.m = int(m)
        self.d = int(d)
        self.V = build_qft(m) if V is None else np.asarray(V, dtype=complex)
        if self.V.shape != (self.m, self.m):
            raise ArityError(f"V must be {m}x{m}, got {self.V.shape}")

    def __call__(self, phases):
        return self.unitary(phases)

    def unitary(self, phases):
        return compose_interferometer(self.V, build_phase_layer(self.m, self.d, phases))

    def derivatives(self, phases):
        """Stack of ``dU/dphi_k``, shape ``(d, m, m)``.

        Each is rank one: ``i exp(i phi_k) v_k v_k^dagger`` with ``v_k`` column k of V.
        """
        phases = np.asarray(phases, dtype=float).reshape(-1)
        if phases.size != self.d:
            raise ArityError(f"expected {self.d} phases, got {phases.size}")
        cols = self.V[:, : self.d]
        out = np.einsum("ak,bk->kab", cols, cols.conj())
        return out * (1j * np.exp(1j * phases))[:, None, None]
