"""Input validation helpers shared by estimators and entry points."""

from __future__ import annotations

import numbers

import numpy as np


class ConfigurationError(ValueError):
    """Raised when a solver, policy, model or run is configured inconsistently."""


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_fraction(value, name: str, *, open_low=True, closed_high=True) -> float:
    value = float(value)
    low_ok = value > 0 if open_low else value >= 0
    high_ok = value <= 1 if closed_high else value < 1
    if not (low_ok and high_ok):
        raise ConfigurationError(f"{name}={value} outside its admissible range")
    return value


def check_discount(gamma) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise ConfigurationError(f"discount must lie in [0, 1), got {gamma}")
    return gamma


def check_belief(belief):
    """Validate a ParticleBelief at a public entry point (not in inner loops)."""
    states = np.asarray(belief.states)
    weights = np.asarray(belief.weights, dtype=float)
    if states.ndim != 2:
        raise ValueError(f"belief states must be 2-D (particles, state_dim), got {states.shape}")
    if weights.shape != (states.shape[0],) or states.shape[0] < 1:
        raise ValueError("belief needs one weight per particle and at least one particle")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise ValueError("belief weights must be finite and non-negative")
    if not weights.sum() > 0:
        raise ValueError("belief weights sum to zero")
    return belief
