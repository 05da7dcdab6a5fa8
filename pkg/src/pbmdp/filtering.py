"""Closed-loop bootstrap particle filter, run between planning calls."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_belief, check_fraction, check_positive_int
from .belief import ParticleBelief, effective_sample_size, init_belief, propagate, resample
from .model import POMDP
from .rng import generator


@dataclass(frozen=True)
class FilterConfig:
    n_particles: int = 10_000
    resample_threshold: float = 0.5
    rejuvenation: float = 0.0

    def __post_init__(self):
        check_positive_int(self.n_particles, "n_particles")
        check_fraction(self.resample_threshold, "resample_threshold")
        if self.rejuvenation < 0:
            raise ValueError("rejuvenation scale must be non-negative")


def update(
    belief: ParticleBelief,
    action,
    observation,
    model: POMDP,
    cfg: FilterConfig,
    rng: np.random.Generator,
) -> ParticleBelief:
    """One filter step: propagate, reweight by ``Z(o | a, s')``, maybe resample.

    Resampling (followed by the model's rejuvenation move when
    ``cfg.rejuvenation > 0``) happens when the effective sample size drops
    below ``resample_threshold * len(belief)``.  A zero-weight posterior is
    reset to uniform weights and flagged degenerate, exactly as in ``gen_pf``.
    """
    nxt, _ = propagate(belief, action, observation, model, rng)
    if nxt.degenerate:
        return nxt
    if effective_sample_size(nxt) < cfg.resample_threshold * len(nxt):
        nxt = resample(nxt, rng)
        if cfg.rejuvenation > 0:
            nxt = ParticleBelief(model.perturb(nxt.states, cfg.rejuvenation, rng), nxt.weights)
    return nxt


class ParticleFilter(BaseEstimator):
    """Estimator wrapper around :func:`update` bound to one problem model.

    Parameters
    ----------
    n_particles : int
        Number of filter particles ``N_f``.
    resample_threshold : float
        ESS fraction in ``(0, 1]`` below which the filter resamples.
    rejuvenation : float
        Scale passed to the model's ``perturb`` after resampling; 0 disables.
    """

    def __init__(self, n_particles=10_000, resample_threshold=0.5, rejuvenation=0.0):
        self.n_particles = n_particles
        self.resample_threshold = resample_threshold
        self.rejuvenation = rejuvenation

    def fit(self, model: POMDP):
        self.config_ = FilterConfig(self.n_particles, self.resample_threshold, self.rejuvenation)
        self.model_ = model
        return self

    def initialize(self, rng=None) -> ParticleBelief:
        check_is_fitted(self)
        return init_belief(self.model_, self.config_.n_particles, generator(rng))

    def update(self, belief, action, observation, rng=None) -> ParticleBelief:
        check_is_fitted(self)
        check_belief(belief)
        self.model_.check_action(action)
        return update(belief, action, observation, self.model_, self.config_, generator(rng))
