"""One-dimensional Light Dark with integer positions."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .._validation import ConfigurationError
from ..model import POMDP
from . import constants

_SQRT2PI = np.sqrt(2.0 * np.pi)


class LightDark(POMDP):
    """Integer-position Light Dark.

    State rows are ``[position, done]``.  Actions move the agent by
    ``{-10, -1, +1, +10}``; ``0`` stops the episode with ``+100`` at the
    origin and ``-100`` elsewhere.  Observations are ``N(s', |s' - 10| + eps)``.
    """

    name = "lightdark"
    actions = (-10, -1, 0, 1, 10)

    def __init__(self, epsilon=None, **overrides):
        c = dict(constants.LIGHTDARK, **overrides)
        if epsilon is not None:
            c["epsilon"] = epsilon
        if not c["epsilon"] > 0:
            raise ValueError("epsilon must be positive")
        self.epsilon = float(c["epsilon"])
        self.light = int(c["light_location"])
        self.discount = float(c["discount"])
        self.horizon = int(c["horizon"])
        self.init_low, self.init_high = int(c["init_low"]), int(c["init_high"])
        self.goal_reward = float(c["goal_reward"])
        self.wrong_stop_penalty = float(c["wrong_stop_penalty"])
        self.step_cost = float(c["step_cost"])
        self.reward_bound = max(abs(self.goal_reward), abs(self.wrong_stop_penalty), abs(self.step_cost))
        self._c = c

    def config(self):
        return {k: v for k, v in self._c.items() if k != "notes"} | {"name": self.name}

    def initial_states(self, n, rng):
        pos = rng.integers(self.init_low, self.init_high + 1, size=n)
        return np.column_stack([pos, np.zeros(n, dtype=np.int64)])

    def obs_std(self, positions):
        return np.abs(positions - self.light) + self.epsilon

    def generate(self, states, action, rng):
        if action not in self.actions:
            self.check_action(action)
        done = states[:, 1] != 0
        nxt = states.copy()
        if action == 0:
            rewards = np.where(states[:, 0] == 0, self.goal_reward, self.wrong_stop_penalty)
            nxt[:, 1] = 1
        else:
            rewards = np.full(len(states), self.step_cost)
            nxt[:, 0] += np.where(done, 0, action)
        if done.any():
            rewards[done] = 0.0
        pos = nxt[:, 0]
        obs = pos + (np.abs(pos - self.light) + self.epsilon) * rng.standard_normal(len(pos))
        return nxt, obs[:, None], rewards

    def obs_density(self, action, next_states, observation):
        pos = next_states[:, 0]
        sigma = np.abs(pos - self.light) + self.epsilon
        z = (float(np.asarray(observation).reshape(-1)[0]) - pos) / sigma
        return np.exp(-0.5 * z * z) / (sigma * _SQRT2PI)

    def is_terminal(self, states):
        return states[:, 1] != 0

    def perturb(self, states, scale, rng):
        jitter = np.rint(rng.normal(0.0, scale, size=len(states))).astype(np.int64)
        out = states.copy()
        out[:, 0] += np.where(out[:, 1] != 0, 0, jitter)
        return out

    # -- enumeration for QMDP ------------------------------------------------
    @property
    def position_limit(self) -> int:
        return max(abs(self.init_low), abs(self.init_high)) + 10 * self.horizon

    def state_index(self, states):
        L = self.position_limit
        pos = states[:, 0]
        if np.abs(pos).max() > L:
            raise ConfigurationError(f"position outside the enumerated range [-{L}, {L}]")
        return np.where(states[:, 1] != 0, 2 * L + 1, pos + L)

    def transition_model(self):
        """Sparse ``T[a]`` (S x S) and reward matrix ``R`` (S x A) on a truncated range."""
        L = self.position_limit
        n_pos = 2 * L + 1
        S = n_pos + 1
        term = n_pos
        pos = np.arange(-L, L + 1)
        T, R = [], np.zeros((S, len(self.actions)))
        for j, a in enumerate(self.actions):
            if a == 0:
                dest = np.full(n_pos, term)
                R[:n_pos, j] = np.where(pos == 0, self.goal_reward, self.wrong_stop_penalty)
            else:
                dest = np.clip(pos + a, -L, L) + L
                R[:n_pos, j] = self.step_cost
            rows = np.append(np.arange(n_pos), term)
            cols = np.append(dest, term)
            T.append(sparse.csr_matrix((np.ones(S), (rows, cols)), shape=(S, S)))
        return T, R


def lightdark_model(epsilon: float | None = None, **overrides) -> LightDark:
    return LightDark(epsilon=epsilon, **overrides)
