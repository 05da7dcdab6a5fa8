"""Particle beliefs and the particle-filter generative kernel.

A :class:`ParticleBelief` is the state of the particle belief MDP: an ordered
collection of ``C`` weighted state particles.  Weights are stored as raw
products of observation densities and normalised only when read.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import POMDP

# densities below this are treated as exact zeros
DENSITY_FLOOR = 1e-300
# rescale stored weights when their maximum falls below this (underflow guard)
RESCALE_BELOW = 1e-250


@dataclass(frozen=True, eq=False)
class ParticleBelief:
    """Ordered weighted particles ``{(s_i, w_i)}``; not permutation invariant.

    ``degenerate`` marks a belief produced by the uniform-reset fallback after
    every updated weight came out zero.
    """

    states: np.ndarray
    weights: np.ndarray
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def normalized_weights(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    @classmethod
    def uniform(cls, states) -> "ParticleBelief":
        states = np.asarray(states)
        if states.ndim == 1:
            states = states[:, None]
        n = len(states)
        return cls(states, np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class BeliefTransition:
    next_belief: ParticleBelief
    rho: float
    observation: np.ndarray = field(repr=False, default=None)


def init_belief(model: POMDP, n_particles: int, rng: np.random.Generator) -> ParticleBelief:
    """``C`` i.i.d. draws from the model's initial belief, weights ``1/C``."""
    if n_particles < 1:
        raise ValueError("n_particles must be >= 1")
    return ParticleBelief.uniform(model.initial_states(n_particles, rng))


def sample_particle_belief(belief: ParticleBelief, n_particles: int, rng) -> ParticleBelief:
    """Draw ``n_particles`` states i.i.d. from ``belief`` with equal weights."""
    cum = np.cumsum(belief.weights)
    idx = np.searchsorted(cum, rng.random(n_particles) * cum[-1], side="right")
    np.minimum(idx, len(cum) - 1, out=idx)
    return ParticleBelief.uniform(belief.states[idx])


def _sample_index(weights: np.ndarray, total: float, rng) -> int:
    # one uniform against the cumulative prefix; zero-weight particles are never hit
    cum = np.cumsum(weights)
    i = int(np.searchsorted(cum, rng.random() * total, side="right"))
    return min(i, len(weights) - 1)


def propagate(belief: ParticleBelief, action, observation, model: POMDP, rng):
    """Advance every particle through ``G`` and reweight by ``Z(o | a, s')``.

    This is the weight rule shared by :func:`gen_pf` and the closed-loop
    filter.  Returns ``(next_belief, rewards)``; when all updated weights are
    zero the weights are reset to ``1/C`` and the belief is flagged degenerate.
    """
    next_states, _, rewards = model.generate(belief.states, action, rng)
    dens = model.obs_density(action, next_states, observation)
    dens = np.where(dens < DENSITY_FLOOR, 0.0, dens)
    weights = belief.weights * dens
    wmax = weights.max()
    if wmax <= 0.0 or not np.isfinite(wmax):
        n = len(weights)
        return ParticleBelief(next_states, np.full(n, 1.0 / n), degenerate=True), rewards
    if wmax < RESCALE_BELOW:
        weights = weights / wmax
    return ParticleBelief(next_states, weights), rewards


def gen_pf(belief: ParticleBelief, action, model: POMDP, rng: np.random.Generator) -> BeliefTransition:
    """Sample the particle belief MDP transition for ``(belief, action)``.

    Random draws, in order: one uniform selecting the observation-source
    particle ``s_o`` (probability ``w_o / sum w``), one call ``G(s_o, a)``
    producing the observation, then one batched call advancing all particles.
    The returned ``rho`` is the weighted mean reward under the weights before
    the update.
    """
    weights = belief.weights
    total = weights.sum()
    i = _sample_index(weights, total, rng)
    _, obs, _ = model.generate(belief.states[i : i + 1], action, rng)
    o = obs[0]
    next_belief, rewards = propagate(belief, action, o, model, rng)
    rho = float(np.dot(weights, rewards) / total)
    return BeliefTransition(next_belief, rho, o)


def weighted_estimate(belief: ParticleBelief, f) -> float:
    """Self-normalised estimate ``sum w_i f(s_i) / sum w_i``.

    ``f`` maps the ``(C, state_dim)`` state array to ``C`` values.
    """
    values = np.asarray(f(belief.states), dtype=float)
    return float(np.dot(belief.weights, values) / belief.weights.sum())


def effective_sample_size(belief: ParticleBelief) -> float:
    w = belief.weights
    top = w.max()
    if top <= 0:
        return 0.0
    w = w / top  # tiny weights would underflow when squared
    return float(w.sum() ** 2 / np.dot(w, w))


def resample(belief: ParticleBelief, rng: np.random.Generator) -> ParticleBelief:
    """Systematic (low-variance) resampling to ``C`` equally weighted particles."""
    n = len(belief)
    cum = np.cumsum(belief.weights)
    cum /= cum[-1]
    cum[-1] = 1.0
    positions = (rng.random() + np.arange(n)) / n
    idx = np.searchsorted(cum, positions, side="right")
    np.minimum(idx, n - 1, out=idx)
    return ParticleBelief(belief.states[idx], np.full(n, 1.0 / n))


def is_terminal_belief(belief: ParticleBelief, model: POMDP) -> bool:
    return bool(model.is_terminal(belief.states).all())
