"""Heralded probabilistic sources: average over which modes received a photon."""

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .detection import DetectionScheme
from .errors import NoOptimumError
from .fisher import VarianceBound, classical_fisher, total_variance
from .linalg import Interferometer, check_reference
from .optimize import multistart_minimize, variance_objective

SKIP_WEIGHT = 1e-15


@dataclass(frozen=True)
class ScattershotSpec:
    m: int
    d: int
    scheme: DetectionScheme
    efficiency: float
    phases: tuple

    def __post_init__(self):
        check_reference(self.m, self.d)
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency must lie in [0, 1], got {self.efficiency}")
        if len(self.phases) != self.d:
            raise ValueError(f"expected {self.d} phases, got {len(self.phases)}")


def herald_configs(m, p):
    """Every 0/1 occupation pattern with its probability ``p^n (1-p)^(m-n)``.

    Patterns are ordered like ``itertools.product((0, 1), repeat=m)``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {p}")
    out = []
    for cfg in itertools.product((0, 1), repeat=m):
        n = sum(cfg)
        out.append((cfg, p**n * (1.0 - p) ** (m - n)))
    return out


def _config_information(interferometer, scheme, phases):
    """``cfg -> 1/variance`` for every non-empty heralded pattern (0 when singular)."""
    info = {}
    for cfg in itertools.product((0, 1), repeat=interferometer.m):
        if sum(cfg) == 0:
            continue
        bound = total_variance(classical_fisher(interferometer, cfg, scheme, phases))
        info[cfg] = 0.0 if bound.singular else 1.0 / bound.total_variance
    return info


def average_variance(weights, information):
    """Inverse-variance average: ``1/var = sum_i w_i / var_i``."""
    total = 0.0
    for cfg, w in weights:
        if w < SKIP_WEIGHT or sum(cfg) == 0:
            continue
        total += w * information(cfg)
    if total <= 0.0:
        return VarianceBound(float("inf"), 1, True)
    return VarianceBound(1.0 / total, 1, False)


def scattershot_variance(spec, interferometer=None):
    interferometer = interferometer or Interferometer(spec.m, spec.d)
    info = _config_information(interferometer, spec.scheme, np.asarray(spec.phases))
    return average_variance(herald_configs(spec.m, spec.efficiency), info.__getitem__)


PHASE_MODES = ("fixed", "per-p", "per-config")


class SweepPoint(NamedTuple):
    p: float
    bound: VarianceBound
    phases: object  # ndarray of d phases, or None for per-config


def _check_grid(p_grid):
    grid = [float(p) for p in p_grid]
    for p in grid:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"efficiency must lie in [0, 1], got {p}")
    return grid


def scattershot_sweep(m, d, scheme, phases, p_grid, phase_mode="fixed", opts=None):
    """Averaged variance at each efficiency in ``p_grid``.

    ``phase_mode``:
      ``"fixed"``       every configuration at ``phases``;
      ``"per-p"``       one phase vector re-optimised for each p, warm-started
                        from the previous grid point's optimum and from ``phases``;
      ``"per-config"``  each heralded pattern at its own optimal phases.
    """
    check_reference(m, d)
    if phase_mode not in PHASE_MODES:
        raise ValueError(f"phase_mode must be one of {PHASE_MODES}, got {phase_mode!r}")
    grid = _check_grid(p_grid)
    interferometer = Interferometer(m, d)
    phases = np.asarray(phases, dtype=float).reshape(d)

    if phase_mode == "fixed":
        info = _config_information(interferometer, scheme, phases)
        return [
            SweepPoint(p, average_variance(herald_configs(m, p), info.__getitem__), phases)
            for p in grid
        ]

    if phase_mode == "per-config":
        info = _best_config_information(interferometer, scheme, opts)
        return [
            SweepPoint(p, average_variance(herald_configs(m, p), info.__getitem__), None)
            for p in grid
        ]

    rows = []
    warm = []
    for p in grid:
        weights = herald_configs(m, p)

        def objective(x, weights=weights):
            info = _config_information(interferometer, scheme, x)
            return average_variance(weights, info.__getitem__).total_variance

        try:
            opt = multistart_minimize(objective, d, opts, initial=warm + [phases])
        except NoOptimumError:
            rows.append(SweepPoint(p, VarianceBound(float("inf"), 1, True), None))
            continue
        info = _config_information(interferometer, scheme, opt.phases)
        rows.append(SweepPoint(p, average_variance(weights, info.__getitem__), opt.phases))
        warm = [opt.phases]
    return rows


def _best_config_information(interferometer, scheme, opts):
    info = {}
    for cfg in itertools.product((0, 1), repeat=interferometer.m):
        if sum(cfg) == 0:
            continue
        objective = variance_objective(interferometer, cfg, scheme)
        try:
            opt = multistart_minimize(objective, interferometer.d, opts)
        except NoOptimumError:
            info[cfg] = 0.0
            continue
        info[cfg] = 1.0 / opt.variance
    return info


def crossing_efficiency(rows, level):
    """Smallest efficiency at which the swept variance drops to ``level``.

    Linear interpolation between the bracketing grid points; ``None`` if the
    curve never reaches ``level``.
    """
    prev = None
    for row in rows:
        p, bound = row[0], row[1]
        v = bound.total_variance if isinstance(bound, VarianceBound) else bound
        if v <= level:
            if prev is None or not np.isfinite(prev[1]):
                return p
            p0, v0 = prev
            return p0 + (v0 - level) * (p - p0) / (v0 - v)
        prev = (p, v)
    return None
