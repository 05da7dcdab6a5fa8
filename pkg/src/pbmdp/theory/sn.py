"""Self-normalised importance sampling on finite supports.

Provides the infinite-order Renyi divergence (the supremum of the importance
ratio), the SN estimator, and a Monte Carlo check of the exponential
concentration bound ``P(|E_P f - mu_SN| > lam) <= 3 exp(-N t^2)`` with
``t = lam / (||f|| d_inf) - 1 / sqrt(N)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._validation import ConfigurationError, check_positive_int
from ..rng import generator

_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistPair:
    """Target ``p`` and proposal ``q`` on the support ``0..K-1``."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if p.ndim != 1 or p.shape != q.shape or len(p) == 0:
            raise ValueError("p and q must be 1-D arrays of equal, non-zero length")
        if np.any(p < 0) or np.any(q < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(p.sum() - 1) > _SUM_TOL or abs(q.sum() - 1) > _SUM_TOL:
            raise ValueError("p and q must each sum to 1")
        if np.any((q == 0) & (p > 0)):
            raise ValueError("p is not absolutely continuous with respect to q")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def ratio(self) -> np.ndarray:
        """Importance weights ``p / q`` (0 where ``q`` is 0)."""
        out = np.zeros_like(self.p)
        np.divide(self.p, self.q, out=out, where=self.q > 0)
        return out

    def expectation(self, f) -> float:
        return float(np.dot(self.p, np.asarray(f, dtype=float)))


def renyi_inf(pair: DiscreteDistPair) -> float:
    """``max p(x) / q(x)`` over points with ``q(x) > 0``; always at least 1."""
    return float(pair.ratio[pair.q > 0].max())


def sn_estimate(pair: DiscreteDistPair, f, n: int, rng=None) -> float:
    """SN estimate of ``E_p[f]`` from ``n`` i.i.d. draws of ``q``.

    Returns ``nan`` when every sampled weight is zero (degenerate sample).
    """
    check_positive_int(n, "N")
    value, degenerate = sn_estimates(pair, f, n, 1, rng)
    return float("nan") if degenerate[0] else float(value[0])


def self_normalized(weights, values) -> float:
    """``sum w_i v_i / sum w_i``; ``nan`` when every weight is zero."""
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if total == 0:
        return float("nan")
    return float(np.dot(w, np.asarray(values, dtype=float)) / total)


def sn_from_samples(pair: DiscreteDistPair, f, samples) -> float:
    """SN estimate for a given array of support indices."""
    samples = np.asarray(samples)
    return self_normalized(pair.ratio[samples], np.asarray(f, dtype=float)[samples])


def sn_estimates(pair: DiscreteDistPair, f, n: int, trials: int, rng=None):
    """``trials`` independent SN estimates; returns ``(values, degenerate_mask)``."""
    rng = generator(rng)
    f = np.asarray(f, dtype=float)
    if f.shape != pair.p.shape:
        raise ValueError("f must give one value per support point")
    idx = rng.choice(len(pair.q), size=(trials, n), p=pair.q)
    w = pair.ratio[idx]
    total = w.sum(axis=1)
    degenerate = total == 0
    values = np.where(degenerate, np.nan, (w * f[idx]).sum(axis=1) / np.where(degenerate, 1.0, total))
    return values, degenerate


def concentration_t(lam: float, f_sup: float, d_inf: float, n: int) -> float:
    return lam / (f_sup * d_inf) - 1.0 / math.sqrt(n)


def concentration_bound(lam: float, f_sup: float, d_inf: float, n: int) -> float:
    """``3 exp(-N t^2)``; may exceed 1, in which case it is vacuous."""
    t = concentration_t(lam, f_sup, d_inf, n)
    return 3.0 * math.exp(-n * t * t)


@dataclass(frozen=True)
class ConcentrationResult:
    n: int
    lam: float
    t: float
    violation_rate: float
    bound: float
    degenerate_trials: int
    trials: int

    @property
    def passed(self) -> bool:
        return self.violation_rate <= self.bound


def theorem1_experiment(pair: DiscreteDistPair, f, n: int, lam: float, trials: int, rng=None) -> ConcentrationResult:
    """Empirical rate of ``|E_p f - mu_SN| > lam`` next to the exponential bound.

    Refuses (``ConfigurationError``) unless ``lam > ||f|| d_inf / sqrt(N)``.
    Degenerate samples (all weights zero) count as violations.
    """
    check_positive_int(n, "N")
    check_positive_int(trials, "trials")
    f = np.asarray(f, dtype=float)
    f_sup = float(np.abs(f).max())
    d_inf = renyi_inf(pair)
    if f_sup == 0:
        raise ConfigurationError("f is identically zero; the bound is undefined")
    if not lam > f_sup * d_inf / math.sqrt(n):
        raise ConfigurationError(
            f"lam={lam} does not exceed ||f|| d_inf / sqrt(N) = {f_sup * d_inf / math.sqrt(n):.6g}"
        )
    values, degenerate = sn_estimates(pair, f, n, trials, rng)
    truth = pair.expectation(f)
    violations = degenerate | (np.abs(np.nan_to_num(values, nan=np.inf) - truth) > lam)
    return ConcentrationResult(
        n=n,
        lam=lam,
        t=concentration_t(lam, f_sup, d_inf, n),
        violation_rate=float(violations.mean()),
        bound=concentration_bound(lam, f_sup, d_inf, n),
        degenerate_trials=int(degenerate.sum()),
        trials=trials,
    )
