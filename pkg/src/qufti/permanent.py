"""Matrix permanents.

Ryser's formula with Gray-code column updates is the workhorse; a direct sum
over permutations serves as the test oracle. The Ryser kernels also carry the
directional derivative ``d/de perm(W + e*D)`` so amplitude gradients cost one
pass over the subsets.

Each kernel has a numba path and a vectorised numpy path; see ``_accel``.
"""

import itertools

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import ShapeError, SizeGuardError

RYSER_MAX_N = 24
NAIVE_MAX_N = 9
_CHUNK_BITS = 14


def _as_square(M, name="matrix"):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {M.shape}")
    return M


# ---------------------------------------------------------------- numba path


def _ryser_grad_py(A, D):
    n = A.shape[0]
    nd = D.shape[0]
    grads = np.zeros(nd, dtype=np.complex128)
    if n == 0:
        return 1.0 + 0.0j, grads
    s = np.zeros(n, dtype=np.complex128)
    ds = np.zeros((nd, n), dtype=np.complex128)
    pre = np.empty(n + 1, dtype=np.complex128)
    total = 0.0 + 0.0j
    count = 0
    for g in range(1, 1 << n):
        j = 0
        while not (g >> j) & 1:
            j += 1
        gray = g ^ (g >> 1)
        if (gray >> j) & 1:
            count += 1
            for r in range(n):
                s[r] += A[r, j]
            for k in range(nd):
                for r in range(n):
                    ds[k, r] += D[k, r, j]
        else:
            count -= 1
            for r in range(n):
                s[r] -= A[r, j]
            for k in range(nd):
                for r in range(n):
                    ds[k, r] -= D[k, r, j]
        sgn = 1.0 if (n - count) % 2 == 0 else -1.0
        pre[0] = 1.0
        for r in range(n):
            pre[r + 1] = pre[r] * s[r]
        total += sgn * pre[n]
        if nd:
            suf = 1.0 + 0.0j
            for r in range(n - 1, -1, -1):
                w = sgn * pre[r] * suf
                for k in range(nd):
                    grads[k] += ds[k, r] * w
                suf *= s[r]
    return total, grads


_ryser_grad_nb = njit(_ryser_grad_py)


def _batch_py(U, dU, in_idx, rows, norms):
    nconf, t = rows.shape
    nd = dU.shape[0]
    amps = np.empty(nconf, dtype=np.complex128)
    grads = np.empty((nconf, nd), dtype=np.complex128)
    W = np.empty((t, t), dtype=np.complex128)
    Wd = np.empty((nd, t, t), dtype=np.complex128)
    for c in range(nconf):
        for a in range(t):
            ra = rows[c, a]
            for b in range(t):
                cb = in_idx[b]
                W[a, b] = U[ra, cb]
                for k in range(nd):
                    Wd[k, a, b] = dU[k, ra, cb]
        p, g = _ryser_grad_nb(W, Wd)
        amps[c] = p / norms[c]
        for k in range(nd):
            grads[c, k] = g[k] / norms[c]
    return amps, grads


_batch_nb = njit(_batch_py)


# ---------------------------------------------------------------- numpy path


def _subset_masks(n, start, stop):
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(np.float64)


def _ryser_grad_np(A, D):
    """Ryser over all column subsets, vectorised in chunks of 2**14 subsets."""
    n = A.shape[0]
    nd = D.shape[0]
    grads = np.zeros(nd, dtype=complex)
    if n == 0:
        return 1.0 + 0.0j, grads
    total = 0.0 + 0.0j
    nsub = 1 << n
    for start in range(1, nsub, 1 << _CHUNK_BITS):
        stop = min(start + (1 << _CHUNK_BITS), nsub)
        masks = _subset_masks(n, start, stop)
        sizes = masks.sum(axis=1)
        sgn = np.where((n - sizes) % 2 == 0, 1.0, -1.0)
        s = masks @ A.T  # (subsets, rows)
        total += np.sum(sgn * np.prod(s, axis=1))
        if nd:
            ones = np.ones((s.shape[0], 1), dtype=complex)
            pre = np.cumprod(np.hstack([ones, s[:, :-1]]), axis=1)
            suf = np.cumprod(np.hstack([ones, s[:, :0:-1]]), axis=1)[:, ::-1]
            others = pre * suf  # product of all row sums except row r
            for k in range(nd):
                ds = masks @ D[k].T
                grads[k] += np.sum(sgn * np.sum(ds * others, axis=1))
    return total, grads


def _batch_np(U, dU, in_idx, rows, norms):
    nconf = rows.shape[0]
    nd = dU.shape[0]
    amps = np.empty(nconf, dtype=complex)
    grads = np.empty((nconf, nd), dtype=complex)
    for c in range(nconf):
        sel = np.ix_(rows[c], in_idx)
        W = U[sel]
        Wd = dU[(slice(None),) + sel] if nd else np.zeros((0,) + W.shape, complex)
        p, g = _ryser_grad_np(W, Wd)
        amps[c] = p / norms[c]
        grads[c] = g / norms[c]
    return amps, grads


# ---------------------------------------------------------------- public API


def ryser_with_gradients(A, D, use_numba=None):
    """Permanent of ``A`` and its directional derivatives along each ``D[k]``."""
    A = _as_square(A)
    D = np.asarray(D, dtype=complex)
    if D.ndim == 2:
        D = D[None]
    if D.shape[1:] != A.shape:
        raise ShapeError(f"direction shape {D.shape[1:]} != matrix shape {A.shape}")
    if A.shape[0] > RYSER_MAX_N:
        raise SizeGuardError(f"n={A.shape[0]} exceeds Ryser guard {RYSER_MAX_N}")
    use_numba = USE_NUMBA if use_numba is None else use_numba
    kernel = _ryser_grad_nb if use_numba else _ryser_grad_np
    total, grads = kernel(np.ascontiguousarray(A), np.ascontiguousarray(D))
    return complex(total), np.asarray(grads)


def permanent_ryser(M, use_numba=None):
    """Permanent via Ryser inclusion-exclusion, O(2^n n)."""
    M = _as_square(M)
    empty = np.zeros((0,) + M.shape, dtype=complex)
    return ryser_with_gradients(M, empty, use_numba)[0]


def permanent_naive(M):
    """Permanent by summing over all n! permutations."""
    M = _as_square(M)
    n = M.shape[0]
    if n > NAIVE_MAX_N:
        raise SizeGuardError(f"n={n} exceeds naive guard {NAIVE_MAX_N}")
    rows = np.arange(n)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        total += np.prod(M[rows, perm])
    return complex(total)


def permanent_minor_gradient(W, Wdot):
    """Sum over entries of ``Wdot[r, c] * perm(W minus row r, column c)``.

    This is the derivative of ``perm(W + e * Wdot)`` at ``e = 0``.
    """
    W = _as_square(W, "W")
    Wdot = _as_square(Wdot, "Wdot")
    if W.shape != Wdot.shape:
        raise ShapeError(f"shape mismatch: {W.shape} vs {Wdot.shape}")
    n = W.shape[0]
    total = 0.0 + 0.0j
    for r in range(n):
        for c in range(n):
            if Wdot[r, c] == 0:
                continue
            minor = np.delete(np.delete(W, r, axis=0), c, axis=1)
            total += Wdot[r, c] * permanent_ryser(minor)
    return complex(total)


def batch_amplitudes(U, dU, in_idx, rows, norms, use_numba=None):
    """Amplitudes and phase gradients for many output configurations at once.

    ``in_idx`` lists the input column of every photon (length t), ``rows[c]``
    the output row of every photon for configuration c, and ``norms[c]`` the
    factorial normalisation. ``dU`` has shape ``(d, m, m)`` (``d`` may be 0).
    """
    t = rows.shape[1] if rows.ndim == 2 else 0
    if t > RYSER_MAX_N:
        raise SizeGuardError(f"{t} photons exceeds Ryser guard {RYSER_MAX_N}")
    use_numba = USE_NUMBA if use_numba is None else use_numba
    kernel = _batch_nb if use_numba else _batch_np
    return kernel(
        np.ascontiguousarray(U, dtype=np.complex128),
        np.ascontiguousarray(dU, dtype=np.complex128),
        np.ascontiguousarray(in_idx, dtype=np.int64),
        np.ascontiguousarray(rows, dtype=np.int64),
        np.ascontiguousarray(norms, dtype=np.float64),
    )
