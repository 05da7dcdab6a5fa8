"""Width, accuracy and confidence constants of the coupled-convergence guarantee."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .._validation import ConfigurationError


@dataclass(frozen=True)
class ConvergenceConstants:
    lam: float
    delta: float
    width: float
    v_max: float


def theorem2_constants(eps, gamma, r_max, d_inf_max, depth, n_actions) -> ConvergenceConstants:
    """Evaluate ``lambda``, ``delta`` and the sufficient width ``C``.

    With ``V = r_max / (1 - gamma)``:

    * ``lambda = eps (1 - gamma)^2 / 8``
    * ``delta = lambda / (V D (1 - gamma)^2)``
    * ``C = max((4 V d / lambda)^2,
      64 V^2 / lambda^2 * (D log(24 |A|^((D+1)/D) V^2 D / lambda^2) + log(1 / delta)))``
    """
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    if not 0 <= gamma < 1:
        raise ConfigurationError("gamma must lie in [0, 1)")
    if not (r_max > 0 and d_inf_max >= 1 and depth >= 1 and n_actions >= 1):
        raise ConfigurationError("need r_max > 0, d_inf_max >= 1, depth >= 1 and n_actions >= 1")
    v = r_max / (1.0 - gamma)
    one_minus_sq = (1.0 - gamma) ** 2
    lam = eps * one_minus_sq / 8.0
    delta = lam / (v * depth * one_minus_sq)
    first = (4.0 * v * d_inf_max / lam) ** 2
    log_term = depth * math.log(24.0 * n_actions ** ((depth + 1) / depth) * v * v * depth / lam**2) + math.log(1.0 / delta)
    second = 64.0 * v * v / lam**2 * log_term
    return ConvergenceConstants(lam=lam, delta=delta, width=max(first, second), v_max=v)
