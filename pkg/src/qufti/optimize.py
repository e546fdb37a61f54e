"""Multistart simplex search for the phases minimising ``Tr[F_clas^-1]``."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import NoOptimumError
from .fisher import classical_fisher, total_variance
from .linalg import Interferometer, check_reference

TWO_PI = 2.0 * np.pi
INIT_COLLAR = 0.1


@dataclass(frozen=True)
class OptimizerOptions:
    starts: int = 32
    max_iters: int = 2000
    xtol: float = 1e-8
    ftol: float = 1e-10
    base_seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (self.xtol > 0 and self.ftol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Optimum:
    phases: np.ndarray
    variance: float
    start_index: int
    converged: bool
    history: list = field(default_factory=list, repr=False, compare=False)


def start_point(d, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(INIT_COLLAR, TWO_PI - INIT_COLLAR, size=d)


def multistart_minimize(objective, d, opts=None, initial=()):
    """Best of ``opts.starts`` Nelder-Mead descents of ``objective`` over R^d.

    Random start ``i`` is drawn from seed ``base_seed + i``. Points in
    ``initial`` are descended first and take the lowest start indices. Ties go
    to the lowest start index. Returned phases are wrapped into ``[0, 2 pi)``.
    """
    opts = opts or OptimizerOptions()
    starts = [np.asarray(x, dtype=float).reshape(d) for x in initial]
    starts += [start_point(d, opts.base_seed + i) for i in range(opts.starts)]
    best = None
    history = []
    for i, x0 in enumerate(starts):
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": opts.max_iters,
                "maxfev": 4 * opts.max_iters,
                "xatol": opts.xtol,
                "fatol": opts.ftol,
            },
        )
        value = float(res.fun)
        history.append((i, value, bool(res.success)))
        if not np.isfinite(value):
            continue
        if best is None or value < best[1]:
            best = (np.mod(res.x, TWO_PI), value, i, bool(res.success))
    if best is None:
        raise NoOptimumError(
            f"all {len(starts)} starts ended on a singular objective", history
        )
    return Optimum(best[0], best[1], best[2], best[3], history)


def variance_objective(interferometer, in_cfg, scheme):
    def objective(phases):
        F = classical_fisher(interferometer, in_cfg, scheme, phases)
        return total_variance(F).total_variance

    return objective


def minimize_variance(m, d, scheme, opts=None, k=1, in_cfg=None, V=None):
    """Optimise the phases of an ``m``-mode, ``d``-phase interferometer for ``scheme``.

    The input defaults to ``k`` photons in every mode. The reported variance
    is per single measurement and is recomputed at the returned phases.
    """
    check_reference(m, d)
    interferometer = Interferometer(m, d, V)
    in_cfg = [k] * m if in_cfg is None else list(in_cfg)
    objective = variance_objective(interferometer, in_cfg, scheme)
    opt = multistart_minimize(objective, d, opts)
    variance = objective(opt.phases)
    return Optimum(opt.phases, variance, opt.start_index, opt.converged, opt.history)
