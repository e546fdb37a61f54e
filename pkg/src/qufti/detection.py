"""Detector arrays: number-resolving (NRD), on-off (SPD) and a single NRD among SPDs."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError
from .fock import OutcomeDistribution, _config_array

SCHEME_NAMES = ("nrd", "spd", "one-nrd")


@dataclass(frozen=True)
class DetectionScheme:
    kind: str
    resolved_mode: int = 1

    def __post_init__(self):
        if self.kind not in SCHEME_NAMES:
            raise ValueError(f"unknown scheme {self.kind!r}; expected one of {SCHEME_NAMES}")
        if self.resolved_mode < 1:
            raise ConfigurationError(f"resolved_mode must be >= 1, got {self.resolved_mode}")

    @classmethod
    def parse(cls, name, resolved_mode=1):
        return cls(name.strip().lower().replace("_", "-"), int(resolved_mode))

    def __str__(self):
        if self.kind == "one-nrd" and self.resolved_mode != 1:
            return f"one-nrd@{self.resolved_mode}"
        return self.kind


NRD = DetectionScheme("nrd")
SPD = DetectionScheme("spd")


def one_nrd(resolved_mode=1):
    return DetectionScheme("one-nrd", resolved_mode)


def classify_outcome(cfg, scheme):
    """Map an output configuration to the label the detector array reports."""
    cfg = tuple(int(x) for x in cfg)
    if scheme.kind == "nrd":
        return cfg
    if scheme.kind == "spd":
        return tuple(min(x, 1) for x in cfg)
    j = scheme.resolved_mode - 1
    if j >= len(cfg):
        raise ConfigurationError(
            f"resolved_mode {scheme.resolved_mode} outside 1..{len(cfg)}"
        )
    rest = cfg[:j] + cfg[j + 1 :]
    return (cfg[j], tuple(min(x, 1) for x in rest))


@lru_cache(maxsize=None)
def outcome_grouping(m, t, scheme):
    """Labels (first-seen order) and the label index of every configuration."""
    labels = []
    index = {}
    group = np.empty(len(_config_array(m, t)), dtype=np.int64)
    for i, cfg in enumerate(_config_array(m, t)):
        label = classify_outcome(cfg, scheme)
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        group[i] = index[label]
    group.setflags(write=False)
    return tuple(labels), group


def _group_sum(values, group, n_groups):
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return np.bincount(group, weights=values, minlength=n_groups)
    out = np.zeros((n_groups, values.shape[1]))
    for k in range(values.shape[1]):
        out[:, k] = np.bincount(group, weights=values[:, k], minlength=n_groups)
    return out


def coarse_grain(state, scheme):
    """Sum configuration probabilities into detector outcomes."""
    m = state.configs.shape[1]
    labels, group = outcome_grouping(m, state.photons, scheme)
    probs = _group_sum(state.probabilities, group, len(labels))
    return OutcomeDistribution(list(labels), probs)


def coarse_grain_arrays(probs, jac, m, t, scheme):
    """Group per-configuration probabilities and Jacobian rows by outcome."""
    labels, group = outcome_grouping(m, t, scheme)
    n = len(labels)
    return labels, _group_sum(probs, group, n), _group_sum(jac, group, n)
