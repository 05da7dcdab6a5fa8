"""Problem-model abstraction shared by every environment and solver.

A :class:`POMDP` exposes a generative model ``G(s, a) -> (s', o, r)`` and an
observation density ``Z(o | a, s')``.  Both operate on a batch of states laid
out as a 2-D array ``(n_particles, state_dim)`` so that a particle belief is
advanced with a handful of vectorised numpy calls.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ._validation import ConfigurationError

Action = Any


@dataclass(frozen=True)
class Transition:
    next_state: np.ndarray
    observation: np.ndarray
    reward: float


class POMDP(abc.ABC):
    """Base class for problem models.

    Subclasses set ``discount``, ``horizon``, ``reward_bound`` and either a
    finite ``actions`` tuple or ``actions = None`` together with an
    implementation of :meth:`sample_action` for continuous action spaces.

    Models are immutable once built; all randomness comes from the generator
    passed by the caller.
    """

    name: str = "pomdp"
    discount: float = 0.95
    horizon: int = 100
    reward_bound: float = 1.0
    actions: Sequence[Action] | None = None

    @property
    def discrete_actions(self) -> bool:
        return self.actions is not None

    def check_action(self, action) -> None:
        if self.actions is not None and action not in self.actions:
            raise ValueError(f"{action!r} is not an action of {self.name}; valid: {list(self.actions)}")

    def sample_action(self, rng: np.random.Generator) -> Action:
        if self.actions is None:
            raise ConfigurationError(f"{self.name} has no action sampler")
        return self.actions[int(rng.integers(len(self.actions)))]

    @abc.abstractmethod
    def initial_states(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``n`` i.i.d. states from the initial belief."""

    @abc.abstractmethod
    def generate(self, states: np.ndarray, action, rng: np.random.Generator):
        """Advance every row of ``states`` independently.

        Returns ``(next_states, observations, rewards)`` with leading
        dimension ``len(states)``.
        """

    @abc.abstractmethod
    def obs_density(self, action, next_states: np.ndarray, observation) -> np.ndarray:
        """Density (or mass) of one ``observation`` under each row of ``next_states``."""

    def is_terminal(self, states: np.ndarray) -> np.ndarray:
        return np.zeros(len(states), dtype=bool)

    def perturb(self, states: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
        """Rejuvenation move used by the closed-loop filter; identity by default."""
        return states

    def config(self) -> dict:
        """Constants echoed into benchmark reports."""
        return {"name": self.name, "discount": self.discount, "horizon": self.horizon}


def step(model: POMDP, state, action, rng: np.random.Generator) -> Transition:
    """Sample one transition ``s', o, r ~ G(s, a)`` for a single state."""
    model.check_action(action)
    s = np.asarray(state)[None, :]
    sp, o, r = model.generate(s, action, rng)
    return Transition(sp[0], o[0], float(r[0]))


def obs_density(model: POMDP, action, next_state, observation) -> float:
    return float(model.obs_density(action, np.asarray(next_state)[None, :], observation)[0])


def discounted_return(rewards, gamma: float) -> float:
    total = 0.0
    for r in reversed(list(rewards)):
        total = r + gamma * total
    return float(total)
