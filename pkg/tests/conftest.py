import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pbmdp.model import POMDP
from pbmdp.theory import TinyPomdp

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def chain(n_actions=1, reward=1.0, discount=0.5, horizon=3):
    """One non-terminal state; every action pays ``reward`` forever."""
    T = np.ones((n_actions, 1, 1))
    Z = np.ones((n_actions, 1, 1))
    R = np.full((1, n_actions), float(reward))
    return TinyPomdp(T, Z, R, [1.0], discount, horizon, name="chain")


def bandit(rewards=(1.0, 0.0), discount=0.5):
    n = len(rewards)
    return TinyPomdp(np.ones((n, 1, 1)), np.ones((n, 1, 1)), np.array([rewards], dtype=float), [1.0], discount, 1, name="bandit")


def two_state(discount=0.5, horizon=2):
    """2 states, 2 actions, 2 observations with dyadic probabilities."""
    T = np.array([[[0.75, 0.25], [0.25, 0.75]], [[0.5, 0.5], [0.5, 0.5]]])
    Z = np.array([[[0.75, 0.25], [0.25, 0.75]], [[0.5, 0.5], [0.5, 0.5]]])
    R = np.array([[1.0, 0.0], [0.0, 0.5]])
    return TinyPomdp(T, Z, R, [0.5, 0.5], discount, horizon, name="two-state")


class LinearGaussian(POMDP):
    """``s' = s + a + N(0, q)``, ``o = s' + N(0, r)``; a Kalman filter is exact."""

    name = "linear-gaussian"
    actions = (-1.0, 0.0, 1.0)
    discount = 0.9
    horizon = 20
    reward_bound = 1.0

    def __init__(self, q=0.5, r=1.0, m0=0.0, p0=4.0):
        self.q, self.r, self.m0, self.p0 = q, r, m0, p0

    def initial_states(self, n, rng):
        return (self.m0 + np.sqrt(self.p0) * rng.standard_normal(n))[:, None]

    def generate(self, states, action, rng):
        nxt = states + action + np.sqrt(self.q) * rng.standard_normal(states.shape)
        obs = nxt + np.sqrt(self.r) * rng.standard_normal(states.shape)
        return nxt, obs, -np.minimum(np.abs(nxt[:, 0]), 1.0)

    def obs_density(self, action, next_states, observation):
        z = (float(np.asarray(observation).reshape(-1)[0]) - next_states[:, 0]) / np.sqrt(self.r)
        return np.exp(-0.5 * z * z) / np.sqrt(2 * np.pi * self.r)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def independent_theorem2(eps, gamma, rmax, dinf, D, A):
    # exact rationals for the polynomial parts, one float log at the end
    eps, gamma, rmax, dinf = (Fraction(x) for x in (eps, gamma, rmax, dinf))
    v = rmax / (1 - gamma)
    lam = eps * (1 - gamma) ** 2 / 8
    delta = lam / (v * D * (1 - gamma) ** 2)
    first = (4 * v * dinf / lam) ** 2
    inner = 24 * v**2 * D / lam**2
    log_term = D * (math.log(inner) + (D + 1) / D * math.log(A)) - math.log(delta)
    second = 64 * float(v**2 / lam**2) * log_term
    return float(lam), float(delta), max(float(first), second)
