"""Particle-belief POMDP planning: Sparse-PFT, Sparse Sampling-omega and benchmarks."""

from ._validation import ConfigurationError
from .belief import ParticleBelief, effective_sample_size, gen_pf, init_belief, resample, weighted_estimate
from .filtering import FilterConfig, ParticleFilter
from .model import POMDP, Transition, discounted_return, obs_density, step

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "FilterConfig",
    "POMDP",
    "ParticleBelief",
    "ParticleFilter",
    "Transition",
    "discounted_return",
    "effective_sample_size",
    "gen_pf",
    "init_belief",
    "obs_density",
    "resample",
    "step",
    "weighted_estimate",
]
